use proptest::prelude::*;
use rgg_core::geometry::{circ_dist, lq_dist, phi, sum_uq_cdf, QSpec, SumPowerCdf, TorusPoint};
use rgg_core::ModelParams;

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, d)
}

proptest! {
    #[test]
    fn circular_distance_is_a_metric(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0) {
        let (ab, ba) = (circ_dist(a, b), circ_dist(b, a));
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ab, ba);
        prop_assert!(circ_dist(a, a) == 0.0);
        prop_assert!(ab <= circ_dist(a, c) + circ_dist(c, b) + 1e-12);
        prop_assert!((circ_dist(a + 2.0, b) - ab).abs() < 1e-12);
    }

    #[test]
    fn lq_norms_shrink_as_q_grows(x in point(6), y in point(6)) {
        let (x, y) = (TorusPoint::new(x).unwrap(), TorusPoint::new(y).unwrap());
        let qs = [1.0, 1.5, 2.0, 4.0, 10.0];
        let mut prev = f64::INFINITY;
        for q in qs {
            let v = lq_dist(&x, &y, QSpec::finite(q).unwrap()).unwrap();
            prop_assert!(v <= prev + 1e-12);
            prev = v;
        }
        let inf = lq_dist(&x, &y, QSpec::Infinity).unwrap();
        prop_assert!(inf <= prev + 1e-12);
        prop_assert!((lq_dist(&y, &x, QSpec::Infinity).unwrap() - inf).abs() == 0.0);
    }

    #[test]
    fn lq_triangle_inequality(x in point(4), y in point(4), z in point(4), q in 1.0f64..8.0) {
        let (x, y, z) = (TorusPoint::new(x).unwrap(), TorusPoint::new(y).unwrap(), TorusPoint::new(z).unwrap());
        let q = QSpec::finite(q).unwrap();
        let xy = lq_dist(&x, &y, q).unwrap();
        prop_assert!(xy <= lq_dist(&x, &z, q).unwrap() + lq_dist(&z, &y, q).unwrap() + 1e-10);
    }

    #[test]
    fn sum_power_cdf_is_monotone(d in 1usize..6, q in 1.0f64..6.0, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let (lo, hi) = if s < t { (s, t) } else { (t, s) };
        let cdf = SumPowerCdf::new(d, q, 4096).unwrap();
        let (a, b) = (cdf.cdf(lo * d as f64), cdf.cdf(hi * d as f64));
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(a <= b + 1e-12);
    }
}

#[test]
fn one_dimensional_cdf_is_exact() {
    for q in [1.0, 2.0, 3.5] {
        for t in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let got = sum_uq_cdf(1, q, t).unwrap();
            assert!((got - f64::powf(t, 1.0 / q)).abs() < 1e-12);
        }
    }
}

#[test]
fn l1_cdf_matches_irwin_hall() {
    // Irwin-Hall: P[S_3 <= 1.5] = 1/2, P[S_3 <= 1/2] = 1/48, P[S_2 <= 1/2] = 1/8
    assert!((sum_uq_cdf(3, 1.0, 1.5).unwrap() - 0.5).abs() < 1e-8);
    assert!((sum_uq_cdf(3, 1.0, 0.5).unwrap() - 1.0 / 48.0).abs() < 1e-8);
    assert!((sum_uq_cdf(2, 1.0, 0.5).unwrap() - 0.125).abs() < 1e-8);
}

#[test]
fn phi_small_values_and_monotonicity() {
    assert_eq!(phi(1).value, 1.0);
    assert!((phi(2).value - 0.75).abs() < 1e-15);
    assert!((phi(3).value - 2.0 / 3.0).abs() < 1e-15);
    let mut prev = 1.0;
    for m in 2..60 {
        let v = phi(m).value;
        assert!(v < prev);
        prev = v;
    }
    // the sum of m uniforms on [-1, 1] has variance m/3
    let big = phi(3000).value;
    let sd = (3000.0f64 / 3.0).sqrt();
    let approx = 2.0 * rgg_core::numeric::normal_cdf(1.0 / sd) - 1.0;
    assert!((big - approx).abs() / approx < 1e-3);
}

#[test]
fn linfty_radius_hits_density() {
    for &(d, p) in &[(1usize, 0.3), (10, 0.5), (1000, 0.05), (1_000_000, 0.5)] {
        let m = ModelParams::linfty(10, d, p).unwrap();
        assert!((m.implied_density() - p).abs() < 1e-12 * p.max(1e-3));
        assert!((m.tau + m.lambda - 1.0).abs() < 1e-15);
    }
}

#[test]
fn finite_q_radius_hits_density() {
    let m = ModelParams::new(10, 8, QSpec::finite(2.0).unwrap(), 0.5).unwrap();
    let got = sum_uq_cdf(8, 2.0, m.tau_pow_q()).unwrap();
    assert!((got - 0.5).abs() < 1e-6);
}
