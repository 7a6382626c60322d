use rgg_core::expansion::{
    exact_signed_count_variance, signed_weight_with, unsigned_graph_asymptotic_with_tolerance,
    variance_predictor_with,
};
use rgg_core::stats::latent_signed_weight_mc;
use rgg_core::{
    chi, expected_weight, expected_weight_1d, mc_run, signed_cycle_asymptotic, signed_weight,
    signed_weight_bound, unsigned_graph_asymptotic, CycleStat, EdgePattern, ModelParams,
    ModelSpec, PolymerConfig, RngSpec, StatSpec, ValidityRule, VarianceModel,
};

fn pat(s: &str) -> EdgePattern {
    s.parse().unwrap()
}

#[test]
fn block_multiplicativity() {
    let m = ModelParams::linfty(10, 60, 0.5).unwrap();
    let c3 = signed_weight(&pat("C3"), &m).unwrap().value;
    let c4 = signed_weight(&pat("C4"), &m).unwrap().value;
    let bowtie = signed_weight(&pat("bowtie"), &m).unwrap().value;
    assert!((bowtie - c3 * c3).abs() <= 1e-10 * bowtie.abs());
    // triangle and square glued at a vertex
    let glued = pat("0-1 1-2 2-0 0-3 3-4 4-5 5-0");
    let v = signed_weight(&glued, &m).unwrap().value;
    assert!((v - c3 * c4).abs() <= 1e-10 * v.abs(), "{v} vs {}", c3 * c4);
    // disjoint union factorises as well
    let two = pat("0-1 1-2 2-0 3-4 4-5 5-3");
    let v = signed_weight(&two, &m).unwrap().value;
    assert!((v - c3 * c3).abs() <= 1e-10 * v.abs());
}

#[test]
fn leaves_kill_signed_weights() {
    let m = ModelParams::linfty(10, 40, 0.5).unwrap();
    for s in ["P2", "P3", "0-1 1-2 2-0 2-3", "0-1 1-2 2-3 3-0 0-4", "0-1 0-2 0-3 1-2 1-3 2-3 3-4"] {
        assert!(signed_weight(&pat(s), &m).unwrap().value.abs() < 1e-10, "{s}");
    }
}

#[test]
fn exact_cycles_track_asymptotics() {
    for &p in &[0.5, 0.2] {
        for &d in &[200usize, 1000, 10_000] {
            let m = ModelParams::linfty(10, d, p).unwrap();
            for len in 3..=6 {
                let exact = signed_weight(&EdgePattern::cycle(len).unwrap(), &m).unwrap().value;
                let asy = signed_cycle_asymptotic(len, &m).unwrap().leading;
                let l = m.lambda;
                let slack = 10.0 * p.powi(len as i32) * (d * d) as f64 * l.powi(2 * (len as i32 - 1));
                assert!((exact - asy).abs() <= slack, "p={p} d={d} m={len}: {exact} vs {asy}");
            }
        }
    }
}

#[test]
fn weights_round_trip_through_one_dimension() {
    let m = ModelParams::linfty(10, 77, 0.3).unwrap();
    for s in ["C3", "C4", "K4", "theta", "K23"] {
        let h = pat(s);
        let w = expected_weight(&h, &m).unwrap();
        let one = expected_weight_1d(&h, m.lambda).unwrap();
        let back = (w.log_value.unwrap() / m.d as f64).exp();
        assert!((back - one).abs() <= 1e-14 * one, "{s}");
        assert!(w.value <= 1.0);
    }
}

#[test]
fn forests_have_product_weights() {
    let m = ModelParams::linfty(10, 50, 0.3).unwrap();
    for s in ["edge", "P3", "0-1 0-2 0-3 3-4", "0-1 2-3"] {
        let h = pat(s);
        let want = 0.3f64.powi(h.edge_count() as i32);
        assert!((expected_weight(&h, &m).unwrap().value - want).abs() < 1e-14 * want.max(1.0));
        assert!((chi(&h, m.lambda).unwrap().value - m.lambda.powi(h.edge_count() as i32)).abs() < 1e-15);
    }
}

#[test]
fn signed_weights_match_latent_monte_carlo() {
    let m = ModelParams::linfty(10, 10, 0.5).unwrap();
    let cfg = PolymerConfig::with_rule(ValidityRule::NoWrap);
    for (i, s) in ["C3", "C4", "K4"].iter().enumerate() {
        let h = pat(s);
        let exact = signed_weight_with(&h, &m, &cfg).unwrap().value;
        let (est, se) = latent_signed_weight_mc(&h, &m, 400_000, RngSpec::new(11 + i as u64)).unwrap();
        assert!((est - exact).abs() <= 4.0 * se, "{s}: {est} +- {se} vs {exact}");
    }
}

#[test]
fn unsigned_asymptotic_needs_its_hypothesis() {
    let h = pat("C4");
    let m = ModelParams::linfty(10, 500, 0.5).unwrap();
    assert!(unsigned_graph_asymptotic(&h, &m).is_err());
    let exact = expected_weight(&h, &m).unwrap().value;
    let girth_scale = 3.0 * 500.0 * m.lambda.powi(4);
    let asy = unsigned_graph_asymptotic_with_tolerance(&h, &m, 10.0).unwrap().value;
    assert!(((asy - exact) / exact).abs() <= girth_scale, "{asy} vs {exact}");

    let big = ModelParams::linfty(10, 1_000_000, 0.5).unwrap();
    for s in ["C3", "C4", "bowtie", "K4"] {
        let h = pat(s);
        let exact = expected_weight(&h, &big).unwrap().value;
        let asy = unsigned_graph_asymptotic(&h, &big).unwrap().value;
        let girth = rgg_core::pattern_facts(&h).unwrap().girth.unwrap() as i32;
        // the exact weight goes through exp(d ln(.)), so rounding grows like d eps
        let tol = 3.0 * 1e6 * big.lambda.powi(girth) + 1e6 * 1e-15;
        assert!(((asy - exact) / exact).abs() <= tol, "{s}: {asy} vs {exact}");
    }
    let bowtie = unsigned_graph_asymptotic(&pat("bowtie"), &big).unwrap().value;
    let c3 = unsigned_graph_asymptotic(&pat("C3"), &big).unwrap().value;
    assert!(((bowtie - c3 * c3) / bowtie).abs() < 1e-6);
}

#[test]
fn bound_dominates_triangle_weight() {
    for d in [1_000usize, 10_000, 100_000, 1_000_000] {
        let m = ModelParams::linfty(10, d, 0.5).unwrap();
        let sw = signed_weight(&pat("C3"), &m).unwrap().value.abs();
        assert!(signed_weight_bound(&pat("C3"), &m, 2.0).unwrap() >= sw);
    }
}

#[test]
fn exact_variance_matches_simulation() {
    let (n, d, p) = (9usize, 10usize, 0.5);
    let m = ModelParams::linfty(n, d, p).unwrap();
    let cfg = PolymerConfig::with_rule(ValidityRule::NoWrap);
    for (i, stat) in [CycleStat::C3, CycleStat::C4].into_iter().enumerate() {
        let pred = variance_predictor_with(stat, n, &m, VarianceModel::RggExact, &cfg).unwrap().value;
        let spec = StatSpec::cycle(stat, p).unwrap();
        let rep = mc_run(&ModelSpec::Rgg(m), &spec, 60_000, RngSpec::new(40 + i as u64)).unwrap();
        let rel = (rep.variance - pred) / pred;
        assert!(rel.abs() < 0.05, "{stat}: mc {} vs exact {pred}", rep.variance);
    }
}

#[test]
fn overlap_variance_with_zero_signal_is_null_variance() {
    let v = exact_signed_count_variance(&pat("C4"), 20, &|_: &EdgePattern| Ok(0.0), 0.3).unwrap();
    let want = 3.0 * rgg_core::numeric::binomial(20, 4) * (0.3f64 * 0.7).powi(4);
    assert!(((v - want) / want).abs() < 1e-12);
}
