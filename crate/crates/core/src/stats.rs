//! Signed subgraph count statistics and the replicate-parallel Monte Carlo harness.
//!
//! With `B = A - p` off the diagonal, `SC_H = sum_S (-p)^(|E|-|S|) c_S` where
//! `c_S` counts present copies of each edge subset `S` inside copies of `H`.
//! For triangles and 4-cycles every `c_S` is a degree, codegree or path count,
//! so both statistics come out of one popcount pass over the bit rows.

use std::time::Instant;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::expansion::{er_variance, CycleStat};
use crate::geometry::ModelParams;
use crate::graph::{
    sample_er, sample_hypercube_rag, sample_rgg, sample_rgg_1d_complement, uniform_torus, within,
    Graph, RngSpec, SigmaSpec,
};
use crate::numeric::{binomial, falling_factorial, mean_variance, NeumaierSum};
use crate::pattern::EdgePattern;

/// Subgraph counts feeding the triangle and 4-cycle statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CycleCounts {
    pub n: u64,
    pub edges: u64,
    /// Paths with two edges, `sum_v C(deg v, 2)`.
    pub cherries: u64,
    pub triangles: u64,
    /// Paths with three edges on four distinct vertices.
    pub paths3: u64,
    pub four_cycles: u64,
}

impl CycleCounts {
    pub fn of(g: &Graph) -> Self {
        let n = g.n();
        let deg: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();
        let edges = deg.iter().sum::<u64>() / 2;
        let cherries = deg.iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
        let mut tri3 = 0u64;
        let mut q4x2 = 0u64;
        let mut walk3 = 0u64;
        for i in 0..n {
            let ri = g.row(i);
            for j in (i + 1)..n {
                let c = ri
                    .iter()
                    .zip(g.row(j))
                    .map(|(a, b)| (a & b).count_ones() as u64)
                    .sum::<u64>();
                q4x2 += c * c.saturating_sub(1) / 2;
                if g.has_edge(i, j) {
                    tri3 += c;
                    walk3 += (deg[i] - 1) * (deg[j] - 1);
                }
            }
        }
        let triangles = tri3 / 3;
        CycleCounts {
            n: n as u64,
            edges,
            cherries,
            triangles,
            paths3: walk3 - 3 * triangles,
            four_cycles: q4x2 / 2,
        }
    }

    /// `sum_k (-p)^(3-k) c_k` with `c = (C(n,3), m(n-2), P2, T)`.
    pub fn signed_triangles(&self, p: f64) -> f64 {
        let n = self.n as f64;
        let c = [
            binomial(self.n, 3),
            self.edges as f64 * (n - 2.0),
            self.cherries as f64,
            self.triangles as f64,
        ];
        poly_in_minus_p(&c, p)
    }

    /// `sum_k (-p)^(4-k) c_k` with `c = (3 C(n,4), m(n-2)(n-3), (n-3) P2 + 2 D, P3, Q4)`
    /// where `D = C(m,2) - P2` counts vertex-disjoint edge pairs.
    pub fn signed_four_cycles(&self, p: f64) -> f64 {
        let n = self.n as f64;
        let m = self.edges as f64;
        let disjoint = binomial(self.edges, 2) - self.cherries as f64;
        let c = [
            3.0 * binomial(self.n, 4),
            m * (n - 2.0) * (n - 3.0),
            (n - 3.0) * self.cherries as f64 + 2.0 * disjoint,
            self.paths3 as f64,
            self.four_cycles as f64,
        ];
        poly_in_minus_p(&c, p)
    }
}

fn poly_in_minus_p(c: &[f64], p: f64) -> f64 {
    let top = c.len() as i32 - 1;
    c.iter()
        .enumerate()
        .map(|(k, &ck)| (-p).powi(top - k as i32) * ck)
        .collect::<NeumaierSum>()
        .value()
}

/// `SC_{C3}(G)`: sum over vertex triples of `(A_ij - p)(A_jk - p)(A_ik - p)`.
pub fn signed_triangle_count(g: &Graph, p: f64) -> f64 {
    CycleCounts::of(g).signed_triangles(p)
}

/// `SC_{C4}(G)`: sum over the three 4-cycles of every 4-set of the product of centered entries.
pub fn signed_4cycle_count(g: &Graph, p: f64) -> f64 {
    CycleCounts::of(g).signed_four_cycles(p)
}

/// Unbiased estimate of `SC_H(G)` from random injective vertex tuples.
///
/// Returns `(estimate, standard error)`. The tuple mean of `SW` is scaled by
/// `(n)_v / |Aut(H)|`, the number of distinct copies of `H` in `K_n`.
pub fn signed_pattern_estimate<R: RngCore + ?Sized>(
    h: &EdgePattern,
    g: &Graph,
    p: f64,
    tuples: u64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if tuples == 0 {
        return invalid("tuple budget must be positive");
    }
    let v = h.vertex_count();
    if v > g.n() {
        return invalid(format!("pattern has {v} vertices but graph only {}", g.n()));
    }
    let aut = h.automorphism_count()? as f64;
    let scale = falling_factorial(g.n() as u64, v as u64) / aut;
    let mut slots = vec![0usize; v];
    let mut values = Vec::with_capacity(tuples as usize);
    for _ in 0..tuples {
        sample_injective(g.n(), &mut slots, rng);
        let sw: f64 = h
            .edges()
            .iter()
            .map(|&(a, b)| if g.has_edge(slots[a], slots[b]) { 1.0 - p } else { -p })
            .product();
        values.push(sw);
    }
    let (mean, var) = if values.len() > 1 {
        mean_variance(&values)
    } else {
        (values[0], 0.0)
    };
    Ok((scale * mean, scale * (var / tuples as f64).sqrt()))
}

fn sample_injective<R: RngCore + ?Sized>(n: usize, slots: &mut [usize], rng: &mut R) {
    for i in 0..slots.len() {
        loop {
            let x = rng.gen_range(0..n);
            if !slots[..i].contains(&x) {
                slots[i] = x;
                break;
            }
        }
    }
}

/// The random graph model sampled by [`mc_run`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelSpec {
    Er { n: usize, p: f64 },
    Rgg(ModelParams),
    Complement1d { n: usize, lambda: f64 },
    Hypercube { n: usize, d: usize, sigma: SigmaSpec },
}

impl ModelSpec {
    pub fn n(&self) -> usize {
        match self {
            ModelSpec::Er { n, .. }
            | ModelSpec::Complement1d { n, .. }
            | ModelSpec::Hypercube { n, .. } => *n,
            ModelSpec::Rgg(m) => m.n,
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        match self {
            ModelSpec::Er { n, p } => sample_er(*n, *p, rng),
            ModelSpec::Rgg(m) => Ok(sample_rgg(m, rng)?.0),
            ModelSpec::Complement1d { n, lambda } => Ok(sample_rgg_1d_complement(*n, *lambda, rng)?.0),
            ModelSpec::Hypercube { n, d, sigma } => Ok(sample_hypercube_rag(*n, *d, sigma, rng)?.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StatKind {
    SignedTriangle,
    SignedFourCycle,
    /// Sampled estimate with the given tuple budget per graph.
    GenericPattern { pattern: EdgePattern, tuples: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatSpec {
    pub kind: StatKind,
    /// Centering density.
    pub p: f64,
}

impl StatSpec {
    pub fn new(kind: StatKind, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return invalid(format!("centering density must lie in (0, 1), got {p}"));
        }
        Ok(StatSpec { kind, p })
    }

    pub fn cycle(stat: CycleStat, p: f64) -> Result<Self> {
        Self::new(
            match stat {
                CycleStat::C3 => StatKind::SignedTriangle,
                CycleStat::C4 => StatKind::SignedFourCycle,
            },
            p,
        )
    }

    pub fn pattern(&self) -> EdgePattern {
        match &self.kind {
            StatKind::SignedTriangle => CycleStat::C3.pattern(),
            StatKind::SignedFourCycle => CycleStat::C4.pattern(),
            StatKind::GenericPattern { pattern, .. } => pattern.clone(),
        }
    }

    /// Evaluates the statistic; `rng` is only consumed by sampled patterns.
    pub fn evaluate<R: RngCore + ?Sized>(&self, g: &Graph, rng: &mut R) -> Result<f64> {
        match &self.kind {
            StatKind::SignedTriangle => Ok(signed_triangle_count(g, self.p)),
            StatKind::SignedFourCycle => Ok(signed_4cycle_count(g, self.p)),
            StatKind::GenericPattern { pattern, tuples } => {
                Ok(signed_pattern_estimate(pattern, g, self.p, *tuples, rng)?.0)
            }
        }
    }

    /// Variance of the statistic under `G(n, p)` with `p` the centering density.
    pub fn null_variance(&self, n: usize) -> Result<f64> {
        Ok(match &self.kind {
            StatKind::SignedTriangle => er_variance(CycleStat::C3, n, self.p),
            StatKind::SignedFourCycle => er_variance(CycleStat::C4, n, self.p),
            StatKind::GenericPattern { pattern, .. } => {
                let copies = falling_factorial(n as u64, pattern.vertex_count() as u64)
                    / pattern.automorphism_count()? as f64;
                copies * (self.p * (1.0 - self.p)).powi(pattern.edge_count() as i32)
            }
        })
    }
}

/// Monte Carlo summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub replicates: usize,
    pub mean: f64,
    /// Bessel-corrected sample variance.
    pub variance: f64,
    pub std_error: f64,
    /// `mean / sqrt(null variance / replicates)`.
    pub z_score_vs_null: f64,
    pub seeds: RngSpec,
    pub wall_time_secs: f64,
    /// Per-replicate statistic values in replicate order.
    pub values: Vec<f64>,
}

/// Samples `replicates` graphs on independent substreams, in parallel on the
/// current rayon pool, and aggregates in replicate order.
pub fn mc_run(
    model: &ModelSpec,
    stat: &StatSpec,
    replicates: usize,
    seeds: RngSpec,
) -> Result<ExperimentReport> {
    if replicates < 2 {
        return invalid("at least two replicates are required");
    }
    let start = Instant::now();
    let values: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeds.replicate(r as u64).rng();
            let g = model.sample(&mut rng)?;
            stat.evaluate(&g, &mut rng)
        })
        .collect::<Result<_>>()?;
    let (mean, variance) = mean_variance(&values);
    let null_var = stat.null_variance(model.n())?;
    let z = if null_var > 0.0 {
        mean / (null_var / replicates as f64).sqrt()
    } else {
        f64::NAN
    };
    Ok(ExperimentReport {
        replicates,
        mean,
        variance,
        std_error: (variance / replicates as f64).sqrt(),
        z_score_vs_null: z,
        seeds,
        wall_time_secs: start.elapsed().as_secs_f64(),
        values,
    })
}

/// Brute-force and dense-matrix reference implementations used by tests.
pub mod oracle {
    use super::*;

    /// Direct enumeration over vertex triples.
    pub fn brute_signed_triangles(g: &Graph, p: f64) -> f64 {
        let b = |i, j| if g.has_edge(i, j) { 1.0 - p } else { -p };
        let n = g.n();
        let mut s = NeumaierSum::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    s.add(b(i, j) * b(j, k) * b(i, k));
                }
            }
        }
        s.value()
    }

    /// Direct enumeration over the three 4-cycles of every 4-set.
    pub fn brute_signed_four_cycles(g: &Graph, p: f64) -> f64 {
        let b = |i, j| if g.has_edge(i, j) { 1.0 - p } else { -p };
        let n = g.n();
        let mut s = NeumaierSum::new();
        for a in 0..n {
            for c in (a + 1)..n {
                for d in (c + 1)..n {
                    for e in (d + 1)..n {
                        s.add(b(a, c) * b(c, d) * b(d, e) * b(e, a));
                        s.add(b(a, c) * b(c, e) * b(e, d) * b(d, a));
                        s.add(b(a, d) * b(d, c) * b(c, e) * b(e, a));
                    }
                }
            }
        }
        s.value()
    }

    /// Sum of `SW` over all injective placements divided by `|Aut(H)|`.
    pub fn brute_signed_pattern(h: &EdgePattern, g: &Graph, p: f64) -> Result<f64> {
        let v = h.vertex_count();
        let n = g.n();
        if v > n {
            return Ok(0.0);
        }
        let aut = h.automorphism_count()? as f64;
        let mut slots = Vec::with_capacity(v);
        let mut used = vec![false; n];
        let mut s = NeumaierSum::new();
        fn rec(
            h: &EdgePattern,
            g: &Graph,
            p: f64,
            slots: &mut Vec<usize>,
            used: &mut [bool],
            s: &mut NeumaierSum,
        ) {
            if slots.len() == h.vertex_count() {
                let w: f64 = h
                    .edges()
                    .iter()
                    .map(|&(a, b)| if g.has_edge(slots[a], slots[b]) { 1.0 - p } else { -p })
                    .product();
                s.add(w);
                return;
            }
            for x in 0..g.n() {
                if !used[x] {
                    used[x] = true;
                    slots.push(x);
                    rec(h, g, p, slots, used, s);
                    slots.pop();
                    used[x] = false;
                }
            }
        }
        rec(h, g, p, &mut slots, &mut used, &mut s);
        Ok(s.value() / aut)
    }

    fn centered(g: &Graph, p: f64) -> Vec<Vec<f64>> {
        let n = g.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else if g.has_edge(i, j) {
                            1.0 - p
                        } else {
                            -p
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i][k];
                for j in 0..n {
                    c[i][j] += aik * b[k][j];
                }
            }
        }
        c
    }

    /// `trace(B^3) / 6` with dense floats.
    pub fn dense_signed_triangles(g: &Graph, p: f64) -> f64 {
        let b = centered(g, p);
        let b2 = matmul(&b, &b);
        let n = b.len();
        (0..n).map(|i| (0..n).map(|j| b2[i][j] * b[j][i]).sum::<f64>()).sum::<f64>() / 6.0
    }

    /// `(trace(B^4) - 2 sum_i r_i^2 + sum_ij B_ij^4) / 8` with `r_i = sum_j B_ij^2`.
    pub fn dense_signed_four_cycles(g: &Graph, p: f64) -> f64 {
        let b = centered(g, p);
        let b2 = matmul(&b, &b);
        let n = b.len();
        let tr4: f64 = (0..n).map(|i| (0..n).map(|j| b2[i][j] * b2[j][i]).sum::<f64>()).sum();
        let r2: f64 = (0..n)
            .map(|i| b[i].iter().map(|x| x * x).sum::<f64>().powi(2))
            .sum();
        let s4: f64 = b.iter().flatten().map(|x| x.powi(4)).sum();
        (tr4 - 2.0 * r2 + s4) / 8.0
    }
}

/// Samples per independent substream in [`latent_signed_weight_mc`].
pub const LATENT_CHUNK: u64 = 1 << 16;

/// Direct Monte Carlo of `E[prod_{e in H} (sigma(x_a - x_b) - p)]` over
/// i.i.d. uniform latent tuples. Returns `(mean, standard error)`.
pub fn latent_signed_weight_mc(
    h: &EdgePattern,
    params: &ModelParams,
    samples: u64,
    seeds: RngSpec,
) -> Result<(f64, f64)> {
    if samples < 2 {
        return invalid("at least two samples are required");
    }
    let (v, d, p) = (h.vertex_count(), params.d, params.p);
    let chunks = samples.div_ceil(LATENT_CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeds.replicate(c).rng();
            let len = LATENT_CHUNK.min(samples - c * LATENT_CHUNK);
            let (mut s, mut s2) = (NeumaierSum::new(), NeumaierSum::new());
            for _ in 0..len {
                let x = uniform_torus(v, d, &mut rng);
                let val: f64 = h
                    .edges()
                    .iter()
                    .map(|&(a, b)| {
                        let adj = within(&x[a * d..(a + 1) * d], &x[b * d..(b + 1) * d], params.q, params.tau);
                        adj as u8 as f64 - p
                    })
                    .product();
                s.add(val);
                s2.add(val * val);
            }
            (s.value(), s2.value())
        })
        .collect();
    let n = samples as f64;
    let sum: NeumaierSum = sums.iter().map(|t| t.0).collect();
    let sum2: NeumaierSum = sums.iter().map(|t| t.1).collect();
    let mean = sum.value() / n;
    let var = ((sum2.value() - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// Deviation in units of the combined standard error.
pub fn z_gap(observed: f64, expected: f64, se: f64) -> f64 {
    if se > 0.0 {
        (observed - expected) / se
    } else if observed == expected {
        0.0
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let k3 = Graph::complete(3).unwrap();
        assert!((signed_triangle_count(&k3, 0.5) - 0.125).abs() < 1e-15);
        let e3 = Graph::empty(3).unwrap();
        assert!((signed_triangle_count(&e3, 0.5) + 0.125).abs() < 1e-15);
        let k4 = Graph::complete(4).unwrap();
        assert!((signed_4cycle_count(&k4, 0.5) - 3.0 / 16.0).abs() < 1e-15);
        let e4 = Graph::empty(4).unwrap();
        assert!((signed_4cycle_count(&e4, 0.5) - 3.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn kernels_match_oracles() {
        let spec = RngSpec::new(21);
        for r in 0..60 {
            let mut rng = spec.replicate(r).rng();
            let n = rng.gen_range(1..=10);
            let dens = rng.gen_range(0.0..1.0);
            let p = rng.gen_range(0.05..0.95);
            let g = sample_er(n, dens, &mut rng).unwrap();
            let t = signed_triangle_count(&g, p);
            let c = signed_4cycle_count(&g, p);
            assert!((t - oracle::brute_signed_triangles(&g, p)).abs() < 1e-9);
            assert!((c - oracle::brute_signed_four_cycles(&g, p)).abs() < 1e-9);
            assert!((t - oracle::dense_signed_triangles(&g, p)).abs() < 1e-9);
            assert!((c - oracle::dense_signed_four_cycles(&g, p)).abs() < 1e-9);
        }
    }

    #[test]
    fn generic_brute_matches_cycles() {
        let mut rng = RngSpec::new(5).rng();
        let g = sample_er(7, 0.4, &mut rng).unwrap();
        let c3 = oracle::brute_signed_pattern(&EdgePattern::cycle(3).unwrap(), &g, 0.3).unwrap();
        let c4 = oracle::brute_signed_pattern(&EdgePattern::cycle(4).unwrap(), &g, 0.3).unwrap();
        assert!((c3 - signed_triangle_count(&g, 0.3)).abs() < 1e-10);
        assert!((c4 - signed_4cycle_count(&g, 0.3)).abs() < 1e-10);
    }

    #[test]
    fn single_edge_estimate() {
        let mut rng = RngSpec::new(6).rng();
        let g = sample_er(30, 0.4, &mut rng).unwrap();
        let want = (g.density() - 0.5) * 435.0;
        let (est, se) =
            signed_pattern_estimate(&EdgePattern::builtin("edge").unwrap(), &g, 0.5, 20_000, &mut rng)
                .unwrap();
        assert!((est - want).abs() < 4.0 * se);
        assert!(signed_pattern_estimate(&EdgePattern::builtin("edge").unwrap(), &g, 0.5, 0, &mut rng).is_err());
    }

    #[test]
    fn mc_run_is_deterministic() {
        let model = ModelSpec::Er { n: 20, p: 0.5 };
        let stat = StatSpec::new(StatKind::SignedTriangle, 0.5).unwrap();
        let a = mc_run(&model, &stat, 50, RngSpec::new(3)).unwrap();
        let b = mc_run(&model, &stat, 50, RngSpec::new(3)).unwrap();
        assert_eq!(a.values, b.values);
        assert!(mc_run(&model, &stat, 1, RngSpec::new(3)).is_err());
    }
}
