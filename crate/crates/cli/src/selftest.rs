//! Invariant suite run by `rgg selftest`.
//!
//! Each check returns a short detail string. The quick budgets finish in
//! well under a minute; `--full` uses the larger Monte Carlo budgets.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rgg_core::bounds::{conv_bracket, SmallBallSampler};
use rgg_core::expansion::{expected_weight_with, signed_cycle_asymptotic_with, signed_weight_with};
use rgg_core::graph::{complement_1d_from_latents, rgg_from_latents};
use rgg_core::numeric::{binomial, wilson_interval};
use rgg_core::polymer::{chi_with, expected_weight_1d_with, psi_with};
use rgg_core::stats::oracle::{brute_signed_four_cycles, brute_signed_triangles};
use rgg_core::stats::latent_signed_weight_mc;
use rgg_core::{
    circ_dist, derive_tau_lambda, detect, expected_weight_1d, gamma_moment_mc, hypercube_influences,
    kl_bound, lq_dist, mc_run, phi, power_table, sample_er, sample_hypercube_rag, sample_rgg,
    sample_rgg_1d_complement, sigma_conv_moment_linfty, signed_4cycle_count, signed_triangle_count,
    sum_uq_cdf, CycleStat, Decision, DetectionConfig, EdgePattern, Graph, MdGrid, ModelParams,
    ModelSpec, PolymerConfig, QSpec, RngSpec, SigmaSpec, StatKind, StatSpec, TorusPoint,
    ValidityRule,
};
use serde_json::json;

use crate::{Report, RunContext};

type Check = Result<String, String>;

struct Budget {
    full: bool,
}

impl Budget {
    fn pick(&self, quick: u64, full: u64) -> u64 {
        if self.full {
            full
        } else {
            quick
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn nowrap() -> PolymerConfig {
    PolymerConfig::with_rule(ValidityRule::NoWrap)
}

fn pat(s: &str) -> EdgePattern {
    s.parse().expect("builtin pattern")
}

fn within_4se(est: f64, se: f64, want: f64) -> bool {
    (est - want).abs() <= 4.0 * se + 1e-15
}

// torus geometry

fn circ_metric(seed: RngSpec, _: &Budget) -> Check {
    let mut rng = seed.rng();
    for _ in 0..2000 {
        let (a, b, c): (f64, f64, f64) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        ensure(circ_dist(a, b) == circ_dist(b, a), || format!("asymmetric at {a}, {b}"))?;
        ensure(circ_dist(a, a) == 0.0, || format!("nonzero self distance at {a}"))?;
        ensure(circ_dist(a, c) <= circ_dist(a, b) + circ_dist(b, c) + 1e-12, || {
            format!("triangle inequality fails at {a}, {b}, {c}")
        })?;
    }
    Ok("2000 triples".into())
}

fn lq_ordering(seed: RngSpec, _: &Budget) -> Check {
    let mut rng = seed.rng();
    for _ in 0..500 {
        let d = rng.gen_range(1..12);
        let x = TorusPoint::new((0..d).map(|_| rng.gen_range(0.0..2.0)).collect()).map_err(e)?;
        let y = TorusPoint::new((0..d).map(|_| rng.gen_range(0.0..2.0)).collect()).map_err(e)?;
        let inf = lq_dist(&x, &y, QSpec::Infinity).map_err(e)?;
        let one = lq_dist(&x, &y, QSpec::Finite(1.0)).map_err(e)?;
        let mut last = one;
        for q in [1.5, 2.0, 3.0, 8.0] {
            let v = lq_dist(&x, &y, QSpec::Finite(q)).map_err(e)?;
            ensure(v <= last * (1.0 + 1e-12) && v >= inf * (1.0 - 1e-12), || {
                format!("norm ordering fails at q={q}: {v} vs [{inf}, {last}]")
            })?;
            last = v;
        }
    }
    Ok("500 pairs, q in {1, 1.5, 2, 3, 8, inf}".into())
}

fn threshold_monotone(_: RngSpec, _: &Budget) -> Check {
    for q in [QSpec::Infinity, QSpec::Finite(2.0), QSpec::Finite(5.0)] {
        let mut last = 0.0;
        for i in 1..20 {
            let p = i as f64 / 20.0;
            let m = derive_tau_lambda(10, 12, q, p).map_err(e)?;
            ensure(m.tau >= last, || format!("tau decreases at q={q}, p={p}"))?;
            last = m.tau;
            if q == QSpec::Infinity {
                let back = m.tau.powi(12);
                ensure((back - p).abs() <= 1e-12 * p, || format!("tau^d = {back} vs p = {p}"))?;
            }
        }
    }
    Ok("p grid of 19 points, three q".into())
}

fn sum_uq_cdf_matches_mc(seed: RngSpec, b: &Budget) -> Check {
    let samples = b.pick(40_000, 1_000_000);
    let mut rng = seed.rng();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let d = rng.gen_range(1..16usize);
        let q = rng.gen_range(1.0..6.0);
        let t = d as f64 / (q + 1.0) * rng.gen_range(0.5..1.5);
        let exact = sum_uq_cdf(d, q, t).map_err(e)?;
        let lo = sum_uq_cdf(d, q, 0.9 * t).map_err(e)?;
        ensure(lo <= exact + 1e-12, || format!("cdf decreases at d={d} q={q}"))?;
        let hits = (0..samples)
            .filter(|_| (0..d).map(|_| rng.gen::<f64>().powf(q)).sum::<f64>() <= t)
            .count() as u64;
        let est = hits as f64 / samples as f64;
        let se = (exact * (1.0 - exact) / samples as f64).sqrt();
        ensure(within_4se(est, se, exact), || {
            format!("d={d} q={q:.3} t={t:.3}: mc {est} vs {exact}")
        })?;
        worst = worst.max((est - exact).abs() / se.max(1e-300));
    }
    Ok(format!("20 triples, {samples} samples, worst gap {worst:.2} SE"))
}

fn phi_checks(seed: RngSpec, b: &Budget) -> Check {
    let samples = b.pick(100_000, 1_000_000);
    let mut rng = seed.rng();
    let mut last = f64::INFINITY;
    for m in 1..=200 {
        let v = phi(m).value;
        ensure(v <= last, || format!("phi increases at m={m}"))?;
        last = v;
    }
    for m in 1..=12 {
        let hits = (0..samples)
            .filter(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).sum::<f64>().abs() <= 1.0)
            .count();
        let est = hits as f64 / samples as f64;
        let want = phi(m).value;
        let se = (want * (1.0 - want) / samples as f64).sqrt();
        ensure(within_4se(est, se, want), || format!("m={m}: mc {est} vs {want}"))?;
    }
    Ok(format!("monotone to m=200, MC m<=12 with {samples} samples"))
}

// graph model

fn sampler_determinism(seed: RngSpec, _: &Budget) -> Check {
    let m = ModelParams::linfty(60, 10, 0.4).map_err(e)?;
    let a = sample_rgg(&m, &mut seed.rng()).map_err(e)?.0;
    let b = sample_rgg(&m, &mut seed.rng()).map_err(e)?.0;
    ensure(a == b, || "same seed gave different graphs".into())?;
    let spec = ModelSpec::Rgg(m);
    let stat = StatSpec::cycle(CycleStat::C4, 0.4).map_err(e)?;
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(e)?
            .install(|| mc_run(&spec, &stat, 64, seed).map_err(e))
    };
    let (one, many) = (run(1)?, run(4)?);
    ensure(
        one.values.iter().map(|v| v.to_bits()).eq(many.values.iter().map(|v| v.to_bits())),
        || "replicate values depend on thread count".into(),
    )?;
    Ok("graphs and 64 replicate values identical at 1 and 4 threads".into())
}

fn sampler_invariants(seed: RngSpec, _: &Budget) -> Check {
    let mut rng = seed.rng();
    for n in [1, 2, 63, 64, 65, 130] {
        let m = ModelParams::new(n, 5, QSpec::Finite(2.0), 0.3).map_err(e)?;
        let graphs = [
            sample_er(n, 0.3, &mut rng).map_err(e)?,
            sample_rgg(&m, &mut rng).map_err(e)?.0,
            sample_rgg(&ModelParams::linfty(n, 7, 0.3).map_err(e)?, &mut rng).map_err(e)?.0,
            sample_rgg_1d_complement(n, 0.1, &mut rng).map_err(e)?.0,
            sample_hypercube_rag(n, 6, &SigmaSpec::Threshold { tau: 1.0 }, &mut rng).map_err(e)?.0,
        ];
        for g in &graphs {
            g.check_invariants().map_err(e)?;
        }
    }
    Ok("five samplers at six sizes".into())
}

fn and_factorization(seed: RngSpec, _: &Budget) -> Check {
    let mut rng = seed.rng();
    for _ in 0..100 {
        let (n, d) = (rng.gen_range(2..25), rng.gen_range(1..9));
        let m = ModelParams::linfty(n, d, rng.gen_range(0.05..0.95)).map_err(e)?;
        let coords: Vec<f64> = (0..n * d).map(|_| rng.gen_range(0.0..2.0)).collect();
        let g = rgg_from_latents(&m, &coords).map_err(e)?;
        for i in 0..n {
            for j in i + 1..n {
                let all = (0..d).all(|k| circ_dist(coords[i * d + k], coords[j * d + k]) <= m.tau);
                ensure(g.has_edge(i, j) == all, || format!("pair ({i},{j}) at n={n} d={d}"))?;
            }
        }
    }
    Ok("100 latent sets".into())
}

fn complement_duality(seed: RngSpec, b: &Budget) -> Check {
    let lambda = 0.15;
    let mut rng = seed.rng();
    let m = ModelParams::linfty(40, 1, 1.0 - lambda).map_err(e)?;
    for _ in 0..50 {
        let coords: Vec<f64> = (0..40).map(|_| rng.gen_range(0.0..2.0)).collect();
        let c = complement_1d_from_latents(&coords, lambda).map_err(e)?;
        let g = rgg_from_latents(&m, &coords).map_err(e)?;
        ensure(c == g.complement(), || "complement model differs from the complemented RGG".into())?;
    }
    let reps = b.pick(200, 2000);
    let (mut dens_c, mut dens_g) = (0.0, 0.0);
    for _ in 0..reps {
        dens_c += sample_rgg_1d_complement(40, lambda, &mut rng).map_err(e)?.0.density();
        dens_g += 1.0 - sample_rgg(&m, &mut rng).map_err(e)?.0.density();
    }
    let (dc, dg) = (dens_c / reps as f64, dens_g / reps as f64);
    ensure((dc - dg).abs() < 0.01 && (dc - lambda).abs() < 0.01, || {
        format!("densities {dc} and {dg} vs {lambda}")
    })?;
    Ok(format!("50 shared latent sets; matched densities {dc:.4} / {dg:.4}"))
}

// one-dimensional polymers

fn chi_multiplicative(_: RngSpec, _: &Budget) -> Check {
    let cfg = nowrap();
    for lambda in [0.01, 0.04] {
        let c4 = chi_with(&pat("C4"), lambda, &cfg).map_err(e)?.value;
        let c5 = chi_with(&pat("C5"), lambda, &cfg).map_err(e)?.value;
        let k23 = chi_with(&pat("K23"), lambda, &cfg).map_err(e)?.value;
        let cases = [
            ("C4.C4", pat("0-1 1-2 2-3 3-0 0-4 4-5 5-6 6-0"), c4 * c4),
            ("C4.K23", pat("0-1 1-2 2-3 3-0 3-4 4-5 5-6 6-3 4-7 7-6"), c4 * chi_with(&pat("0-1 1-2 2-3 3-0 1-4 4-3"), lambda, &cfg).map_err(e)?.value),
            ("C4+C5", pat("0-1 1-2 2-3 3-0 4-5 5-6 6-7 7-8 8-4"), c4 * c5),
            ("C4-edge", pat("0-1 1-2 2-3 3-0 3-4"), c4 * lambda),
        ];
        for (name, h, want) in cases {
            let got = chi_with(&h, lambda, &cfg).map_err(e)?.value;
            ensure((got - want).abs() <= 1e-12 * want.abs().max(1e-300), || {
                format!("{name} at lambda={lambda}: {got} vs {want}")
            })?;
        }
        ensure(k23 > 0.0, || "K23 chi vanished".into())?;
    }
    Ok("vertex-glued and disjoint unions".into())
}

fn polymer_item_bounds(_: RngSpec, _: &Budget) -> Check {
    let cfg = nowrap();
    let names = ["edge", "P3", "C3", "C4", "C5", "C6", "K4", "K23", "theta", "bowtie", "0-1 2-3", "0-1 1-2 2-3 3-0 4-5"];
    for lambda in [0.005, 0.03] {
        for s in names {
            let h = pat(s);
            let (v, c) = (h.vertex_count() as i32, h.component_count() as i32);
            let chi = chi_with(&h, lambda, &cfg).map_err(e)?.value;
            ensure(chi <= lambda.powi(v - c) * (1.0 + 1e-9), || format!("chi({s}) above lambda^(|V|-numc)"))?;
            let psi = psi_with(&h, lambda, &cfg).map_err(e)?.value;
            let expo = (v as f64 / 2.0 + 1.0).max((v - c) as f64);
            ensure(psi.abs() <= 2.0 * lambda.powf(expo) * (1.0 + 1e-9), || format!("|psi({s})| too large"))?;
        }
    }
    Ok(format!("{} patterns at two rates", names.len()))
}

fn pie_identity(_: RngSpec, _: &Budget) -> Check {
    for s in ["C4", "C6", "K4", "K23", "theta", "bowtie"] {
        expected_weight_1d(&pat(s), 0.01).map_err(e)?;
    }
    for k in 1..=12u64 {
        let total: f64 = (0..=k).map(|j| binomial(k, j) * if (k - j) % 2 == 0 { 1.0 } else { -1.0 }).sum();
        ensure(total == 0.0, || format!("alternating sum nonzero at |E| = {k}"))?;
    }
    Ok("both inclusion-exclusion routes agree on six patterns".into())
}

fn chi_matches_mc(seed: RngSpec, b: &Budget) -> Check {
    let samples = b.pick(1_000_000, 10_000_000);
    let mut rng = seed.rng();
    let mut worst: f64 = 0.0;
    for lambda in [0.02, 0.05] {
        for s in ["C3", "C4", "C5", "C6", "K23"] {
            let h = pat(s);
            let edges = h.edges().to_vec();
            let v = h.vertex_count();
            let cut = 1.0 - lambda;
            let mut x = vec![0.0; v];
            let mut hits = 0u64;
            for _ in 0..samples {
                for xi in x.iter_mut() {
                    *xi = rng.gen_range(0.0..2.0);
                }
                hits += edges.iter().all(|&(a, b)| circ_dist(x[a], x[b]) >= cut) as u64;
            }
            let want = chi_with(&h, lambda, &nowrap()).map_err(e)?.value;
            let est = hits as f64 / samples as f64;
            let se = (want * (1.0 - want) / samples as f64).sqrt();
            ensure(within_4se(est, se, want), || format!("{s} at {lambda}: mc {est} vs {want}"))?;
            if se > 0.0 {
                worst = worst.max((est - want).abs() / se);
            }
        }
    }
    Ok(format!("{samples} samples per case, worst gap {worst:.2} SE"))
}

// cluster expansion

fn block_multiplicative(_: RngSpec, _: &Budget) -> Check {
    let m = ModelParams::linfty(10, 40, 0.5).map_err(e)?;
    let sw = |s: &str| signed_weight_with(&pat(s), &m, &nowrap()).map(|w| w.value).map_err(e);
    let (c3, c4) = (sw("C3")?, sw("C4")?);
    for (s, want) in [("bowtie", c3 * c3), ("0-1 1-2 2-0 0-3 3-4 4-5 5-0", c3 * c4), ("0-1 1-2 2-3 3-0 4-5 5-6 6-4", c3 * c4)] {
        let got = sw(s)?;
        ensure((got - want).abs() <= 1e-10 * want.abs(), || format!("{s}: {got} vs {want}"))?;
    }
    Ok("glued and disjoint blocks".into())
}

fn leaf_kill(_: RngSpec, _: &Budget) -> Check {
    let m = ModelParams::linfty(10, 40, 0.3).map_err(e)?;
    for s in ["edge", "P3", "0-1 1-2 2-0 2-3", "0-1 1-2 2-3 3-0 0-4", "0-1 0-2 0-3 1-2 1-3 2-3 3-4"] {
        let v = signed_weight_with(&pat(s), &m, &nowrap()).map_err(e)?.value;
        ensure(v.abs() <= 1e-10, || format!("{s}: {v}"))?;
    }
    Ok("five patterns with a leaf".into())
}

fn exact_vs_asymptotic(_: RngSpec, _: &Budget) -> Check {
    for p in [0.5, 0.2] {
        for d in [200usize, 1000, 10_000] {
            let m = ModelParams::linfty(10, d, p).map_err(e)?;
            for len in 3..=6usize {
                let h = EdgePattern::cycle(len).map_err(e)?;
                let exact = signed_weight_with(&h, &m, &nowrap()).map_err(e)?.value;
                let asy = signed_cycle_asymptotic_with(len, &m, &nowrap()).map_err(e)?.leading;
                let slack = 10.0 * p.powi(len as i32) * (d * d) as f64 * m.lambda.powi(2 * (len as i32 - 1));
                ensure((exact - asy).abs() <= slack, || format!("C{len} d={d} p={p}: {exact} vs {asy}"))?;
            }
        }
    }
    Ok("C3..C6 on a (d, p) grid".into())
}

fn signed_weight_latent_mc(seed: RngSpec, b: &Budget) -> Check {
    let samples = b.pick(200_000, 1_000_000);
    let m = ModelParams::linfty(10, 30, 0.5).map_err(e)?;
    let mut out = String::new();
    for (i, s) in ["C3", "C4"].iter().enumerate() {
        let h = pat(s);
        let exact = signed_weight_with(&h, &m, &nowrap()).map_err(e)?.value;
        let (est, se) = latent_signed_weight_mc(&h, &m, samples, seed.replicate(i as u64)).map_err(e)?;
        ensure(within_4se(est, se, exact), || format!("{s}: mc {est} +- {se} vs {exact}"))?;
        let _ = write!(out, "{s} {:.2} SE; ", (est - exact).abs() / se);
    }
    Ok(format!("{out}{samples} tuples"))
}

fn weight_round_trip(_: RngSpec, _: &Budget) -> Check {
    let m = ModelParams::linfty(10, 77, 0.3).map_err(e)?;
    for s in ["C3", "C4", "K4", "theta", "K23"] {
        let h = pat(s);
        let w = expected_weight_with(&h, &m, &nowrap()).map_err(e)?;
        let one = expected_weight_1d_with(&h, m.lambda, &nowrap()).map_err(e)?;
        let back = (w.log_value.ok_or("nonpositive weight")? / m.d as f64).exp();
        ensure((back - one).abs() <= 1e-14 * one, || format!("{s}: {back} vs {one}"))?;
    }
    Ok("five patterns".into())
}

// statistics

fn kernels_match_brute(seed: RngSpec, _: &Budget) -> Check {
    let mut rng = seed.rng();
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.05..0.95);
        let g = sample_er(n, rng.gen_range(0.0..1.0), &mut rng).map_err(e)?;
        let (t, bt) = (signed_triangle_count(&g, p), brute_signed_triangles(&g, p));
        let (f, bf) = (signed_4cycle_count(&g, p), brute_signed_four_cycles(&g, p));
        ensure((t - bt).abs() <= 1e-9 && (f - bf).abs() <= 1e-9, || {
            format!("n={n}: ({t}, {f}) vs ({bt}, {bf})")
        })?;
    }
    Ok("200 graphs with n <= 10".into())
}

fn null_centering(seed: RngSpec, b: &Budget) -> Check {
    let reps = b.pick(400, 4000) as usize;
    let model = ModelSpec::Er { n: 30, p: 0.4 };
    let specs = [
        StatSpec::cycle(CycleStat::C3, 0.4).map_err(e)?,
        StatSpec::cycle(CycleStat::C4, 0.4).map_err(e)?,
        StatSpec::new(StatKind::GenericPattern { pattern: pat("K23"), tuples: 2000 }, 0.4).map_err(e)?,
    ];
    for (i, s) in specs.iter().enumerate() {
        let r = mc_run(&model, s, reps, seed.replicate(i as u64)).map_err(e)?;
        ensure(r.mean.abs() <= 4.0 * r.std_error, || format!("{:?}: mean {} se {}", s.kind, r.mean, r.std_error))?;
    }
    Ok(format!("three statistics, {reps} ER samples"))
}

fn permutation_invariance(seed: RngSpec, _: &Budget) -> Check {
    let mut rng = seed.rng();
    for _ in 0..30 {
        let n = rng.gen_range(5..80);
        let g = sample_er(n, 0.3, &mut rng).map_err(e)?;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let h = Graph::from_edges(n, &edges).map_err(e)?;
        ensure(signed_triangle_count(&g, 0.3) == signed_triangle_count(&h, 0.3), || "triangles changed".into())?;
        ensure(signed_4cycle_count(&g, 0.3) == signed_4cycle_count(&h, 0.3), || "4-cycles changed".into())?;
    }
    Ok("30 random relabelings".into())
}

fn complement_parity(seed: RngSpec, _: &Budget) -> Check {
    let mut rng = seed.rng();
    for _ in 0..30 {
        let n = rng.gen_range(4..60);
        let p = rng.gen_range(0.1..0.9);
        let g = sample_er(n, p, &mut rng).map_err(e)?;
        let c = g.complement();
        let (t, tc) = (signed_triangle_count(&g, p), signed_triangle_count(&c, 1.0 - p));
        let (f, fc) = (signed_4cycle_count(&g, p), signed_4cycle_count(&c, 1.0 - p));
        let tol = |x: f64| 1e-9 * x.abs().max(1.0) + 1e-15 * (n as f64).powi(4);
        ensure((t + tc).abs() <= tol(t), || format!("triangles {t} vs {tc}"))?;
        ensure((f - fc).abs() <= tol(f), || format!("4-cycles {f} vs {fc}"))?;
    }
    Ok("triangle odd, 4-cycle even on 30 graphs".into())
}

// detection

fn detect_deterministic(seed: RngSpec, _: &Budget) -> Check {
    let m = ModelParams::linfty(80, 10, 0.5).map_err(e)?;
    let g = sample_rgg(&m, &mut seed.rng()).map_err(e)?.0;
    for stat in [CycleStat::C3, CycleStat::C4] {
        let a = detect(&g, &m, stat).map_err(e)?;
        let b = detect(&g, &m, stat).map_err(e)?;
        ensure(a == b, || format!("{stat} outcome changed between calls"))?;
    }
    Ok("repeated calls agree".into())
}

fn type_one_error(seed: RngSpec, b: &Budget) -> Check {
    let reps = b.pick(100, 500);
    let m = ModelParams::linfty(512, 8, 0.5).map_err(e)?;
    let mut rejections = 0;
    for r in 0..reps {
        let g = sample_er(512, 0.5, &mut seed.replicate(r).rng()).map_err(e)?;
        rejections += (detect(&g, &m, CycleStat::C3).map_err(e)?.decision == Decision::H1) as u64;
    }
    let rate = rejections as f64 / reps as f64;
    ensure(rate <= 0.1, || format!("type I rate {rate}"))?;
    Ok(format!("type I rate {rate} over {reps} null graphs (n=512, d=8, C3)"))
}

fn monotone_power(seed: RngSpec, b: &Budget) -> Check {
    let reps = b.pick(60, 300) as usize;
    let dims = [8, 12, 16, 24, 32, 64];
    let t = power_table(128, 0.5, &dims, &[CycleStat::C4], reps, seed, &DetectionConfig::default()).map_err(e)?;
    let rates: Vec<(f64, f64)> = t
        .rows
        .iter()
        .map(|r| {
            let hits = ((1.0 - r.type2) * reps as f64).round() as u64;
            let (lo, hi) = wilson_interval(hits, reps as u64, 0.95);
            (1.0 - r.type2, (hi - lo) / 2.0)
        })
        .collect();
    for w in rates.windows(2) {
        ensure(w[1].0 <= w[0].0 + 2.0 * w[0].1.max(w[1].1), || format!("power rises: {rates:?}"))?;
    }
    Ok(format!("C4 power over d = {dims:?}"))
}

fn grid_round_trip(_: RngSpec, _: &Budget) -> Check {
    for stat in [CycleStat::C3, CycleStat::C4] {
        let grid = MdGrid::build(stat, 400, 0.5, 10, 20, &nowrap()).map_err(e)?;
        for &d in &grid.dims {
            let m = grid.mean_of(d).ok_or("missing grid point")?;
            ensure(grid.nearest(m) == d, || format!("{stat}: M_{d} maps elsewhere"))?;
        }
    }
    Ok("C3 and C4 on d = 10..20".into())
}

// bounds

fn kl_monotone(_: RngSpec, _: &Budget) -> Check {
    let mut last = f64::INFINITY;
    for d in [50_000usize, 100_000, 200_000, 400_000, 800_000] {
        let kl = kl_bound(50, &ModelParams::linfty(50, d, 0.5).map_err(e)?).map_err(e)?.kl;
        ensure(kl <= last, || format!("kl rises at d={d}"))?;
        last = kl;
    }
    let m = ModelParams::linfty(50, 200_000, 0.5).map_err(e)?;
    let mut last = 0.0;
    for n in [5usize, 10, 20, 40, 80] {
        let kl = kl_bound(n, &m).map_err(e)?.kl;
        ensure(kl >= last, || format!("kl falls at n={n}"))?;
        last = kl;
    }
    Ok("factor-2 grids in d and n".into())
}

fn moment_round_trip(_: RngSpec, _: &Budget) -> Check {
    for (d, p) in [(10usize, 0.5), (300, 0.4), (100_000, 0.2)] {
        let m = ModelParams::linfty(2, d, p).map_err(e)?;
        for t in 1..=5 {
            let c = sigma_conv_moment_linfty(t, &m).map_err(e)?;
            let back = (c.ln_value / d as f64).exp();
            let want = conv_bracket(t, m.lambda);
            ensure((back - want).abs() <= 1e-13 * want, || format!("t={t} d={d}: {back} vs {want}"))?;
        }
    }
    Ok("t = 1..5 at three (d, p)".into())
}

fn influence_symmetry(_: RngSpec, _: &Budget) -> Check {
    for (sigma, d) in [(SigmaSpec::Threshold { tau: 1.0 }, 5), (SigmaSpec::Threshold { tau: 2.0 }, 12), (SigmaSpec::Constant(0.4), 8)] {
        let v = hypercube_influences(&sigma, d).map_err(e)?;
        let first = v.influences[0];
        ensure(v.influences.iter().all(|&x| (x - first).abs() <= 1e-15), || format!("{sigma:?} asymmetric"))?;
    }
    let v = hypercube_influences(&SigmaSpec::Threshold { tau: 1.0 }, 5).map_err(e)?;
    ensure((v.influences[0] - 3.0 / 32.0).abs() <= 1e-15, || "threshold influence is not 3/32".into())?;
    Ok("three symmetric functions".into())
}

fn gamma_identity(seed: RngSpec, b: &Budget) -> Check {
    let (outer, inner) = (b.pick(1000, 4000), b.pick(400, 2000));
    let mut out = String::new();
    for (i, (q, d)) in [(QSpec::Infinity, 30usize), (QSpec::Finite(2.0), 10)].into_iter().enumerate() {
        let m = ModelParams::new(2, d, q, 0.5).map_err(e)?;
        let est = gamma_moment_mc(&m, 2, outer, inner, seed.replicate(i as u64)).map_err(e)?;
        let (want, want_se) = match q {
            QSpec::Infinity => (signed_weight_with(&pat("C4"), &m, &nowrap()).map_err(e)?.value, 0.0),
            QSpec::Finite(_) => latent_signed_weight_mc(&pat("C4"), &m, b.pick(200_000, 1_000_000), seed.replicate(10 + i as u64)).map_err(e)?,
        };
        let se = (est.std_error.powi(2) + want_se * want_se).sqrt();
        ensure(within_4se(est.estimate, se, want), || format!("q={q}: {} vs {want}", est.estimate))?;
        let _ = write!(out, "q={q} {:.2} SE; ", (est.estimate - want).abs() / se);
    }
    Ok(out.trim_end_matches("; ").to_string())
}

fn small_ball_lemma(seed: RngSpec, b: &Budget) -> Check {
    let count = b.pick(10, 50) as usize;
    let s = SmallBallSampler::new(50, 10.0, b.pick(100_000, 1_000_000), seed).map_err(e)?;
    let intervals = crate::commands::random_intervals(&s, count, seed.replicate(u64::MAX));
    for &(lo, hi) in &intervals {
        let r = s.check(lo, hi).map_err(e)?;
        ensure(r.lemma_holds, || format!("[{lo}, {hi}]: {} > {}", r.probability, r.lemma_bound))?;
    }
    Ok(format!("{count} intervals at d=50, q=10"))
}

type CheckFn = fn(RngSpec, &Budget) -> Check;

const CHECKS: &[(&str, CheckFn)] = &[
    ("circ-dist-metric", circ_metric),
    ("lq-norm-ordering", lq_ordering),
    ("threshold-monotone", threshold_monotone),
    ("sum-uq-cdf-mc", sum_uq_cdf_matches_mc),
    ("phi-monotone-mc", phi_checks),
    ("sampler-determinism", sampler_determinism),
    ("sampler-invariants", sampler_invariants),
    ("and-factorization", and_factorization),
    ("complement-duality", complement_duality),
    ("chi-multiplicative", chi_multiplicative),
    ("polymer-item-bounds", polymer_item_bounds),
    ("inclusion-exclusion", pie_identity),
    ("chi-vs-mc", chi_matches_mc),
    ("block-multiplicative", block_multiplicative),
    ("leaf-kill", leaf_kill),
    ("exact-vs-asymptotic", exact_vs_asymptotic),
    ("signed-weight-vs-latent-mc", signed_weight_latent_mc),
    ("weight-round-trip", weight_round_trip),
    ("kernels-vs-brute-force", kernels_match_brute),
    ("null-centering", null_centering),
    ("permutation-invariance", permutation_invariance),
    ("complement-parity", complement_parity),
    ("detect-deterministic", detect_deterministic),
    ("type-one-error", type_one_error),
    ("monotone-power", monotone_power),
    ("grid-round-trip", grid_round_trip),
    ("kl-monotone", kl_monotone),
    ("moment-round-trip", moment_round_trip),
    ("influence-symmetry", influence_symmetry),
    ("gamma-four-cycle", gamma_identity),
    ("small-ball-lemma", small_ball_lemma),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run(full: bool, ctx: &RunContext) -> Result<Report, crate::CliError> {
    let budget = Budget { full };
    let base = RngSpec::new(ctx.seed);
    let mut csv = String::from("check,status,detail\n");
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for (i, (name, f)) in CHECKS.iter().enumerate() {
        let outcome = f(base.replicate(i as u64), &budget);
        let (status, detail) = match &outcome {
            Ok(d) => ("pass", d.clone()),
            Err(d) => {
                failed.push(*name);
                ("FAIL", d.clone())
            }
        };
        eprintln!("{status:4} {name}: {detail}");
        let _ = writeln!(csv, "{name},{status},{}", detail.replace(',', ";"));
        rows.push(json!({ "check": name, "status": status, "detail": detail }));
    }
    Ok(Report {
        summary: format!("{}/{} checks passed", CHECKS.len() - failed.len(), CHECKS.len()),
        json: serde_json::Value::Array(rows),
        csv,
        binary: None,
        failure: (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", "))),
    })
}
