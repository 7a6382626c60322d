use rgg_core::detection::{mean_gap_in_sds, phase_csv, PHASE_CSV_HEADER};
use rgg_core::{
    decide, detect, phase_diagram, power_curve, predicted_success, sample_er, sample_rgg,
    CycleStat, Decision, DetectionConfig, Graph, MdGrid, ModelParams, PhaseModel, PolymerConfig,
    RngSpec, ValidityRule,
};

#[test]
fn ties_go_to_h1_on_either_side() {
    assert_eq!(decide(5.0, 10.0), Decision::H1);
    assert_eq!(decide(4.999, 10.0), Decision::H0);
    assert_eq!(decide(-5.0, -10.0), Decision::H1);
    assert_eq!(decide(-4.0, -10.0), Decision::H0);
}

#[test]
fn detect_is_deterministic() {
    let m = ModelParams::linfty(60, 8, 0.5).unwrap();
    let (g, _) = sample_rgg(&m, &mut RngSpec::new(3).rng()).unwrap();
    let a = detect(&g, &m, CycleStat::C4).unwrap();
    let b = detect(&g, &m, CycleStat::C4).unwrap();
    assert_eq!(a, b);
}

#[test]
fn predictor_orders_the_statistics() {
    let at = |d| ModelParams::linfty(512, d, 0.5).unwrap();
    assert!(predicted_success(CycleStat::C3, 512, &at(8)).unwrap().z > 5.0);
    assert!(predicted_success(CycleStat::C4, 512, &at(2048)).unwrap().z < 1.0);
    for d in [64, 128, 256] {
        let c3 = predicted_success(CycleStat::C3, 512, &at(d)).unwrap().z;
        let c4 = predicted_success(CycleStat::C4, 512, &at(d)).unwrap().z;
        assert!(c4 > c3, "d={d}");
    }
}

#[test]
fn triangle_test_separates_at_low_dimension() {
    let m = ModelParams::linfty(512, 8, 0.5).unwrap();
    let reps = 40;
    let mut hits = 0;
    let mut nulls = 0;
    for r in 0..reps {
        let seeds = RngSpec::new(900).replicate(r);
        let (g, _) = sample_rgg(&m, &mut seeds.rng()).unwrap();
        hits += (detect(&g, &m, CycleStat::C3).unwrap().decision == Decision::H1) as usize;
        let h = sample_er(512, 0.5, &mut seeds.replicate(1 << 40).rng()).unwrap();
        nulls += (detect(&h, &m, CycleStat::C3).unwrap().decision == Decision::H0) as usize;
    }
    assert!(hits * 10 >= reps as usize * 9, "{hits}/{reps}");
    assert!(nulls * 10 >= reps as usize * 9, "{nulls}/{reps}");
}

#[test]
fn degenerate_density_cannot_be_told_apart() {
    let t = power_curve(30, 1.0, &[5, 10], CycleStat::C3, 20, RngSpec::new(1)).unwrap();
    for r in &t.rows {
        assert_eq!(r.type1, 1.0 - r.type2);
    }
    let k = Graph::complete(30).unwrap();
    let m = ModelParams::linfty(30, 5, 1.0).unwrap();
    assert_eq!(detect(&k, &m, CycleStat::C4).unwrap().statistic, 0.0);
}

#[test]
fn power_csv_has_one_row_per_grid_point() {
    let t = power_curve(40, 0.5, &[8, 12, 16], CycleStat::C4, 10, RngSpec::new(2)).unwrap();
    let csv = t.to_csv(CycleStat::C4);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "d,type1,type2,ci_lo,ci_hi");
    assert_eq!(lines.len(), 4);
    for r in &t.rows {
        assert!(r.ci_lo <= r.type2 && r.type2 <= r.ci_hi);
    }
}

#[test]
fn grid_inverts_its_own_means() {
    let cfg = PolymerConfig::with_rule(ValidityRule::NoWrap);
    let grid = MdGrid::build(CycleStat::C4, 400, 0.5, 10, 20, &cfg).unwrap();
    for &d in &grid.dims {
        assert_eq!(grid.nearest(grid.mean_of(d).unwrap()), d);
    }
    let mid = (grid.mean_of(15).unwrap() + grid.mean_of(16).unwrap()) / 2.0;
    assert_eq!(grid.nearest(mid), 15);
    assert!(grid.means.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn grid_rejects_dimensions_outside_the_expansion() {
    let cfg = PolymerConfig::with_rule(ValidityRule::NoWrap);
    assert!(MdGrid::build(CycleStat::C4, 400, 0.5, 2, 20, &cfg).is_err());
    assert!(MdGrid::build(CycleStat::C4, 400, 0.5, 20, 10, &cfg).is_err());
}

#[test]
fn gaps_grow_with_n() {
    let cfg = DetectionConfig::default();
    let small = mean_gap_in_sds(CycleStat::C4, 200, 0.5, 12, &cfg).unwrap();
    let large = mean_gap_in_sds(CycleStat::C4, 800, 0.5, 12, &cfg).unwrap();
    assert!(large > 2.0 * small);
}

#[test]
fn phase_models() {
    assert!("".parse::<PhaseModel>().is_err());
    assert!("banana".parse::<PhaseModel>().is_err());
    let linf = phase_diagram("linfty".parse().unwrap());
    let curves: Vec<_> = linf.iter().flat_map(|r| &r.curves).collect();
    assert_eq!(curves.len(), 4);
    assert!(curves.iter().all(|c| !c.conjecture));
    let lq = phase_diagram(PhaseModel::Lq);
    assert!(lq.iter().flat_map(|r| &r.curves).any(|c| c.conjecture));
    for r in linf.iter().chain(&lq) {
        for c in &r.curves {
            assert!(c.points.windows(2).all(|w| w[1].0 > w[0].0));
            assert!(c.points.iter().all(|(x, y)| x.is_finite() && y.is_finite()));
        }
    }
    let csv = phase_csv(&lq);
    assert!(csv.starts_with(PHASE_CSV_HEADER));
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 5));
}
