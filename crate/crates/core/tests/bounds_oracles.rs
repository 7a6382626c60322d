use rgg_core::bounds::{bracket_excess, conv_bracket, small_ball_check, SmallBallSampler};
use rgg_core::{
    gamma_moment_mc, hypercube_influences, hypercube_tv_bound, kl_bound,
    low_degree_advantage_small, overlap_f, sigma_conv_moment_linfty, signed_weight, EdgePattern,
    ModelParams, RngSpec, SigmaSpec,
};

/// Midpoint rule for `int_0^1 g`, split at `cut` so both pieces are smooth.
fn integrate(g: impl Fn(f64) -> f64, cut: f64) -> f64 {
    let piece = |a: f64, b: f64| {
        let n = 20_000;
        let h = (b - a) / n as f64;
        (0..n).map(|i| g(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    };
    piece(0.0, cut) + piece(cut, 1.0)
}

#[test]
fn overlap_branches_and_mean() {
    let l = 0.07;
    assert!((overlap_f(0.0, l) - (1.0 - l)).abs() < 1e-15);
    assert!((overlap_f(3.0 * l, l) - (1.0 - 2.0 * l)).abs() < 1e-15);
    assert_eq!(overlap_f(-0.05, l), overlap_f(0.05, l));
    let mean = integrate(|r| overlap_f(r, l), 2.0 * l);
    assert!((mean - (1.0 - l) * (1.0 - l)).abs() < 1e-12);
}

#[test]
fn first_moment_is_squared_density() {
    for (d, p) in [(10, 0.5), (1000, 0.3), (1_000_000, 0.5)] {
        let m = ModelParams::linfty(50, d, p).unwrap();
        let c = sigma_conv_moment_linfty(1, &m).unwrap();
        assert!((c.value - p * p).abs() < 1e-12, "d={d}");
    }
}

#[test]
fn one_dimensional_second_moment_by_quadrature() {
    let m = ModelParams::linfty(50, 1, 0.9).unwrap();
    let l = m.lambda;
    let quad = integrate(|r| overlap_f(r, l).powi(2), 2.0 * l);
    let got = sigma_conv_moment_linfty(2, &m).unwrap().value;
    assert!((got - quad).abs() < 1e-8, "{got} vs {quad}");
    for t in 1..6 {
        let quad = integrate(|r| overlap_f(r, 0.2).powi(t as i32), 0.4);
        assert!((conv_bracket(t, 0.2) - quad).abs() < 1e-8);
    }
}

#[test]
fn moments_are_dth_powers_of_the_bracket() {
    let m = ModelParams::linfty(50, 300, 0.4).unwrap();
    for t in 1..5 {
        let c = sigma_conv_moment_linfty(t, &m).unwrap();
        let back = (c.ln_value / 300.0).exp();
        assert!((back - conv_bracket(t, m.lambda)).abs() < 1e-14);
    }
}

#[test]
fn excess_scales_like_d_lambda_cubed_t_squared() {
    let mut ratios = Vec::new();
    for d in [1_000usize, 10_000, 100_000] {
        let m = ModelParams::linfty(50, d, 0.5).unwrap();
        for t in 2..=6 {
            let c = sigma_conv_moment_linfty(t, &m).unwrap();
            ratios.push(c.excess / (d as f64 * m.lambda.powi(3) * (t * t) as f64));
        }
    }
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(lo > 0.0 && hi / lo < 3.0, "{lo} .. {hi}");
}

#[test]
fn excess_matches_direct_form_when_it_is_large() {
    for t in 2..8 {
        let l = 0.3;
        let direct = conv_bracket(t, l) / (1.0 - l).powi(2 * t as i32) - 1.0;
        assert!((bracket_excess(t, l) - direct).abs() < 1e-13 * direct.abs().max(1.0));
    }
}

#[test]
fn kl_edge_cases_and_monotonicity() {
    let m = ModelParams::linfty(50, 1_000_000, 0.5).unwrap();
    assert_eq!(kl_bound(1, &m).unwrap().kl, 0.0);
    assert!(kl_bound(2, &m).unwrap().kl.abs() < 1e-30);
    assert!(kl_bound(50, &m).unwrap().kl < 0.01);
    let mut last = f64::INFINITY;
    for d in [100_000usize, 300_000, 1_000_000, 3_000_000] {
        let m = ModelParams::linfty(50, d, 0.5).unwrap();
        let kl = kl_bound(50, &m).unwrap().kl;
        assert!(kl <= last, "d={d}");
        last = kl;
    }
    let mut last = 0.0;
    for n in [10usize, 20, 40, 80] {
        let kl = kl_bound(n, &m).unwrap().kl;
        assert!(kl >= last, "n={n}");
        last = kl;
    }
    assert!(kl_bound(10_000, &m).is_err());
}

#[test]
fn gamma_moments() {
    let m = ModelParams::linfty(50, 30, 0.5).unwrap();
    let first = gamma_moment_mc(&m, 1, 2000, 200, RngSpec::new(1)).unwrap();
    assert!(first.estimate.abs() <= 4.0 * first.std_error);
    let second = gamma_moment_mc(&m, 2, 2000, 1000, RngSpec::new(2)).unwrap();
    let sw = signed_weight(&EdgePattern::cycle(4).unwrap(), &m).unwrap().value;
    let algebra = sigma_conv_moment_linfty(2, &m).unwrap().value - 2.0 * 0.25 * 0.25 + 0.25 * 0.25;
    assert!((sw - algebra).abs() < 1e-15);
    assert!((second.estimate - sw).abs() <= 4.0 * second.std_error, "{second:?} vs {sw}");
    assert!(gamma_moment_mc(&m, 2, 10, 1, RngSpec::new(3)).is_err());
    assert!(gamma_moment_mc(&m, 5, 10, 10, RngSpec::new(3)).is_err());
}

#[test]
fn small_ball() {
    let r = small_ball_check(20, 4.0, 1.0, 1.0, 10_000, RngSpec::new(1)).unwrap();
    assert_eq!(r.probability, 0.0);
    let r = small_ball_check(20, 4.0, 0.0, 19.0, 10_000, RngSpec::new(1)).unwrap();
    assert_eq!(r.probability, 1.0);
    assert!(!r.lemma_informative);
    let s = SmallBallSampler::new(50, 10.0, 100_000, RngSpec::new(5)).unwrap();
    let med = s.quantile(0.5);
    for w in [0.01, 0.05, 0.2] {
        let r = s.check(med - w, med + w).unwrap();
        assert!(r.lemma_holds, "{r:?}");
    }
    assert!(s.check(2.0, 1.0).is_err());
}

#[test]
fn influences() {
    let dict = hypercube_influences(&SigmaSpec::Dictator, 6).unwrap();
    assert_eq!(dict.influences[0], 0.25);
    assert!(dict.influences[1..].iter().all(|&x| x == 0.0));
    let c = hypercube_influences(&SigmaSpec::Constant(0.3), 6).unwrap();
    assert!(c.influences.iter().all(|&x| x == 0.0));
    let th = hypercube_influences(&SigmaSpec::Threshold { tau: 1.0 }, 5).unwrap();
    for &x in &th.influences {
        assert!((x - 3.0 / 32.0).abs() < 1e-15);
    }
    let th = hypercube_influences(&SigmaSpec::Threshold { tau: 2.0 }, 12).unwrap();
    let first = th.influences[0];
    assert!(th.influences.iter().all(|&x| (x - first).abs() < 1e-15));
    assert!(hypercube_influences(&SigmaSpec::Dictator, 30).is_err());
}

#[test]
fn hypercube_ratio() {
    let r = hypercube_tv_bound(10, &SigmaSpec::Dictator, 4).unwrap();
    assert!((r.raw_ratio - 1000.0).abs() < 1e-9);
    assert_eq!(hypercube_tv_bound(10, &SigmaSpec::Constant(0.5), 4).unwrap().raw_ratio, 0.0);
    let r = hypercube_tv_bound(100, &SigmaSpec::Threshold { tau: 1.0 }, 15).unwrap();
    assert!((r.p - 0.5).abs() < 1e-12);
    assert!(r.threshold_constant.unwrap() > 0.0);
}

#[test]
fn advantage() {
    let m = ModelParams::linfty(40, 50, 0.5).unwrap();
    assert_eq!(low_degree_advantage_small(40, &m, 2, 5).unwrap().value, 0.0);
    let r = low_degree_advantage_small(40, &m, 3, 3).unwrap();
    assert_eq!(r.terms.len(), 1);
    let sw = signed_weight(&EdgePattern::cycle(3).unwrap(), &m).unwrap().value;
    let want = rgg_core::numeric::binomial(40, 3) * sw * sw / 0.25f64.powi(3);
    assert!((r.value - want).abs() < 1e-12 * want);
    let mut last = f64::INFINITY;
    for d in [20usize, 40, 80, 160, 320] {
        let m = ModelParams::linfty(40, d, 0.5).unwrap();
        let v = low_degree_advantage_small(40, &m, 6, 5).unwrap().value;
        assert!(v < last, "d={d}");
        last = v;
    }
}
