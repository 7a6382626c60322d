//! One-dimensional polymer quantities for the complement circle model where
//! an edge `{u, v}` is present iff `|x_u - x_v|_C >= 1 - lambda`.
//!
//! `chi(A)` is the probability that every edge of `A` is present and
//! `psi(A) = chi(A) - lambda^|A|`. Shifting one side of a bipartite block by
//! the antipode turns each edge constraint into `|y_u - y_v|_C <= lambda`;
//! with `y_root = 0` and no wrap-around this is the polytope
//! `{s : |s_u - s_v| <= 1 on edges}` scaled by `lambda`, so
//! `chi = (lambda / 2)^(|V| - 1) * vol`. The volume is counted exactly by
//! splitting each `s_v` into integer and fractional parts.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::phi;
use crate::graph::splitmix64;
use crate::numeric::{factorial, DoubleDouble, NeumaierSum};
use crate::pattern::{blocks, two_coloring, CanonKey, EdgePattern};

/// Largest edge count accepted for subset enumeration.
pub const MAX_SUBSET_EDGES: usize = 20;

/// Which size condition a pattern must meet before polymer values are trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ValidityRule {
    /// `|V(A)| <= 1 / (8 lambda)`.
    #[default]
    Stated,
    /// `lambda (2 |V(B)| - 1) < 1` for every block `B`: tree paths can never
    /// wrap around the circle, so every value here is exact.
    NoWrap,
}

impl ValidityRule {
    pub fn check(&self, a: &EdgePattern, lambda: f64) -> Result<()> {
        match self {
            ValidityRule::Stated => {
                let v = a.vertex_count() as f64;
                if v * 8.0 * lambda > 1.0 {
                    return Err(Error::Precondition(format!(
                        "|V(A)| = {v} exceeds 1/(8*lambda) = {:.4}",
                        1.0 / (8.0 * lambda)
                    )));
                }
            }
            ValidityRule::NoWrap => {
                let largest = blocks(a).iter().map(|b| b.vertices.len()).max().unwrap_or(0);
                if largest > 0 && lambda * (2.0 * largest as f64 - 1.0) >= 1.0 {
                    return Err(Error::Precondition(format!(
                        "lambda*(2|V(B)|-1) = {:.4} must be < 1 for the largest block (|V(B)| = {largest})",
                        lambda * (2.0 * largest as f64 - 1.0)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest vertex count admitted at rate `lambda`.
    pub fn max_vertices(&self, lambda: f64) -> usize {
        match self {
            ValidityRule::Stated => (1.0 / (8.0 * lambda)).floor() as usize,
            ValidityRule::NoWrap => {
                let bound = (1.0 / lambda + 1.0) / 2.0;
                let mut v = bound.floor() as usize;
                if v as f64 >= bound {
                    v = v.saturating_sub(1);
                }
                v
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolymerConfig {
    pub rule: ValidityRule,
    /// Samples per Monte Carlo block estimate.
    pub mc_samples: u64,
    pub seed: u64,
    /// Blocks up to this many vertices are counted exactly.
    pub lattice_max_vertices: usize,
}

impl Default for PolymerConfig {
    fn default() -> Self {
        PolymerConfig {
            rule: ValidityRule::Stated,
            mc_samples: 1_000_000,
            seed: 0x5eed,
            lattice_max_vertices: 10,
        }
    }
}

impl PolymerConfig {
    pub fn with_rule(rule: ValidityRule) -> Self {
        PolymerConfig {
            rule,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChiMethod {
    ClosedForm,
    /// Exact polytope volume by lattice counting.
    LatticeCount,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolymerValue {
    pub value: f64,
    pub method: ChiMethod,
    /// Standard error; zero for exact values.
    pub std_error: f64,
}

impl PolymerValue {
    fn exact(value: f64, method: ChiMethod) -> Self {
        PolymerValue {
            value,
            method,
            std_error: 0.0,
        }
    }
}

/// `chi(A)` under the default configuration.
pub fn chi(a: &EdgePattern, lambda: f64) -> Result<PolymerValue> {
    chi_with(a, lambda, &PolymerConfig::default())
}

pub fn chi_with(a: &EdgePattern, lambda: f64, cfg: &PolymerConfig) -> Result<PolymerValue> {
    check_lambda(lambda)?;
    cfg.rule.check(a, lambda)?;
    let v = chi_unchecked(a, lambda, cfg)?;
    assert_item_bounds(a, lambda, &v)?;
    Ok(v)
}

/// `psi(A) = chi(A) - lambda^|E(A)|`.
pub fn psi(a: &EdgePattern, lambda: f64) -> Result<PolymerValue> {
    psi_with(a, lambda, &PolymerConfig::default())
}

pub fn psi_with(a: &EdgePattern, lambda: f64, cfg: &PolymerConfig) -> Result<PolymerValue> {
    let c = chi_with(a, lambda, cfg)?;
    Ok(PolymerValue {
        value: c.value - lambda.powi(a.edge_count() as i32),
        ..c
    })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return invalid(format!("lambda must lie in (0, 1), got {lambda}"));
    }
    Ok(())
}

/// Upper bounds every chi/psi value must respect: `chi <= lambda^(|V|-1)` per
/// connected component and `|psi| <= 2 lambda^max(|V|/2 + 1, |V| - numc)`.
fn assert_item_bounds(a: &EdgePattern, lambda: f64, v: &PolymerValue) -> Result<()> {
    if a.is_empty() {
        return Ok(());
    }
    let slack = |x: f64| x * (1.0 + 1e-9) + 4.0 * v.std_error + 1e-300;
    let numc = a.component_count();
    let nv = a.vertex_count() as f64;
    // product over components of lambda^(|V_c| - 1)
    let item3 = lambda.powf(nv - numc as f64);
    if v.value > slack(item3) {
        return Err(Error::Consistency(format!(
            "chi({a}) = {:e} exceeds lambda^(|V|-numc) = {item3:e}",
            v.value
        )));
    }
    let psi = v.value - lambda.powi(a.edge_count() as i32);
    let expo = (nv / 2.0 + 1.0).max(nv - numc as f64);
    let item5 = 2.0 * lambda.powf(expo);
    if !a.is_forest() && psi.abs() > slack(item5) {
        return Err(Error::Consistency(format!(
            "|psi({a})| = {:e} exceeds 2 lambda^{expo} = {item5:e}",
            psi.abs()
        )));
    }
    Ok(())
}

/// Product over blocks without the validity or bound checks.
fn chi_unchecked(a: &EdgePattern, lambda: f64, cfg: &PolymerConfig) -> Result<PolymerValue> {
    if a.is_forest() {
        return Ok(PolymerValue::exact(
            lambda.powi(a.edge_count() as i32),
            ChiMethod::ClosedForm,
        ));
    }
    let mut factors = Vec::new();
    for b in blocks(a) {
        let bp = b.to_pattern(a);
        let f = block_chi(&bp, lambda, cfg)?;
        if f.value == 0.0 && f.std_error == 0.0 {
            return Ok(PolymerValue::exact(0.0, f.method));
        }
        factors.push(f);
    }
    let value: f64 = factors.iter().map(|f| f.value).product();
    let method = factors.iter().map(|f| f.method).max().unwrap_or(ChiMethod::ClosedForm);
    // first-order delta method
    let var: f64 = (0..factors.len())
        .map(|i| {
            let others: f64 = factors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, f)| f.value)
                .product();
            (factors[i].std_error * others).powi(2)
        })
        .sum();
    Ok(PolymerValue {
        value,
        method,
        std_error: var.sqrt(),
    })
}

/// chi of a single 2-connected block (or bridge).
fn block_chi(b: &EdgePattern, lambda: f64, cfg: &PolymerConfig) -> Result<PolymerValue> {
    let nv = b.vertex_count();
    let ne = b.edge_count();
    if ne == 1 {
        return Ok(PolymerValue::exact(lambda, ChiMethod::ClosedForm));
    }
    let Some(_) = two_coloring(b) else {
        return Ok(PolymerValue::exact(0.0, ChiMethod::ClosedForm));
    };
    let scale = lambda.powi(nv as i32 - 1);
    if ne == nv {
        // a 2-connected block with |E| = |V| is a cycle
        return Ok(PolymerValue::exact(scale * phi(nv - 1).value, ChiMethod::ClosedForm));
    }
    if nv <= cfg.lattice_max_vertices {
        let r = lattice_ratio(b)?;
        return Ok(PolymerValue::exact(scale * r, ChiMethod::LatticeCount));
    }
    let (r, se) = tree_mc_ratio(b, cfg.mc_samples, cfg.seed)?;
    Ok(PolymerValue {
        value: scale * r,
        method: ChiMethod::MonteCarlo,
        std_error: scale * se,
    })
}

fn lattice_cache() -> &'static Mutex<HashMap<CanonKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<CanonKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

type McKey = (Vec<(usize, usize)>, u64, u64);

fn mc_cache() -> &'static Mutex<HashMap<McKey, (f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<McKey, (f64, f64)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `vol / 2^(|V|-1)` for a connected bipartite pattern, exactly.
pub fn lattice_ratio(b: &EdgePattern) -> Result<f64> {
    let nv = b.vertex_count();
    if nv > 16 {
        return Err(Error::PatternTooLarge(format!(
            "lattice count limited to 16 vertices, got {nv}"
        )));
    }
    let key = b.canonical()?.key;
    if let Some(&r) = lattice_cache().lock().unwrap().get(&key) {
        return Ok(r);
    }
    let canon = key.to_pattern();
    let total = count_lattice_extensions(&canon);
    let r = total as f64 / (factorial(nv as u64 - 1) * 2f64.powi(nv as i32 - 1));
    lattice_cache().lock().unwrap().insert(key, r);
    Ok(r)
}

/// Breadth-first order from vertex 0 with parents.
fn bfs_tree(adj: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                order.push(v);
            }
        }
    }
    (order, parent)
}

/// Sum over integer offsets `k` (with `k_root = 0` and `|k_u - k_v| <= 1` on
/// edges) of the number of orderings of the fractional parts consistent with
/// the induced constraints; a difference `k_u = k_v + 1` forces `f_u <= f_v`.
fn count_lattice_extensions(b: &EdgePattern) -> u128 {
    let adj = b.adjacency_lists();
    let n = adj.len();
    let (order, parent) = bfs_tree(&adj);
    let mut k = vec![0i32; n];
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut total = 0u128;
    assign(1, &order, &parent, &adj, &pos, &mut k, &mut total);
    total
}

fn assign(
    depth: usize,
    order: &[usize],
    parent: &[usize],
    adj: &[Vec<usize>],
    pos: &[usize],
    k: &mut Vec<i32>,
    total: &mut u128,
) {
    if depth == order.len() {
        *total += linear_extensions(adj, k);
        return;
    }
    let v = order[depth];
    for delta in -1..=1 {
        k[v] = k[parent[v]] + delta;
        let ok = adj[v]
            .iter()
            .all(|&w| pos[w] > depth || (k[v] - k[w]).abs() <= 1);
        if ok {
            assign(depth + 1, order, parent, adj, pos, k, total);
        }
    }
}

/// Orderings of the non-root fractional parts satisfying every `f_u <= f_v`
/// constraint; zero if some vertex would have to sit below the root's `f = 0`.
fn linear_extensions(adj: &[Vec<usize>], k: &[i32]) -> u128 {
    let n = adj.len();
    let m = n - 1;
    // vertex v >= 1 maps to bit v - 1
    let mut preds = vec![0u32; m];
    for u in 0..n {
        for &v in &adj[u] {
            if k[u] == k[v] + 1 {
                // f_u <= f_v
                if v == 0 {
                    return 0;
                }
                if u != 0 {
                    preds[v - 1] |= 1 << (u - 1);
                }
            }
        }
    }
    let full = (1usize << m) - 1;
    let mut dp = vec![0u128; 1 << m];
    dp[0] = 1;
    for s in 0..=full {
        let ways = dp[s];
        if ways == 0 {
            continue;
        }
        for v in 0..m {
            if s >> v & 1 == 0 && preds[v] as usize & !s == 0 {
                dp[s | 1 << v] += ways;
            }
        }
    }
    dp[full]
}

/// Tree-conditioned estimator of `vol / 2^(|V|-1)`: tree offsets uniform on
/// `[-1, 1]`, success when every non-tree edge has `|s_u - s_v| <= 1`.
pub fn tree_mc_ratio(b: &EdgePattern, samples: u64, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return invalid("Monte Carlo sample count must be positive");
    }
    let cache_key = (b.edges().to_vec(), samples, seed);
    if let Some(&hit) = mc_cache().lock().unwrap().get(&cache_key) {
        return Ok(hit);
    }
    let adj = b.adjacency_lists();
    let n = adj.len();
    let (order, parent) = bfs_tree(&adj);
    if order.len() != n {
        return invalid("tree-conditioned estimator needs a connected pattern");
    }
    let non_tree: Vec<(usize, usize)> = b
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| parent[u] != v && parent[v] != u)
        .collect();
    let mix = b
        .edges()
        .iter()
        .fold(seed, |h, &(u, v)| splitmix64(h ^ ((u as u64) << 32 | v as u64)));
    let mut rng = ChaCha8Rng::seed_from_u64(mix);
    let mut s = vec![0.0f64; n];
    let mut hits = 0u64;
    for _ in 0..samples {
        for &v in &order[1..] {
            s[v] = s[parent[v]] + rng.gen_range(-1.0..=1.0);
        }
        if non_tree.iter().all(|&(u, v)| (s[u] - s[v]).abs() <= 1.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let out = (p, (p * (1.0 - p) / samples as f64).sqrt());
    mc_cache().lock().unwrap().insert(cache_key, out);
    Ok(out)
}

/// chi and psi for every edge subset of a pattern, indexed by subset bit mask.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolymerTable {
    pub lambda: f64,
    pub edges: usize,
    pub chi: Vec<f64>,
    pub psi: Vec<f64>,
    pub method: Vec<ChiMethod>,
    pub std_error: Vec<f64>,
}

/// Union-find forest test on an edge subset.
fn subset_is_forest(h: &EdgePattern, mask: u64) -> bool {
    let mut parent: Vec<usize> = (0..h.vertex_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &(u, v)) in h.edges().iter().enumerate() {
        if mask >> i & 1 == 0 {
            continue;
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

impl PolymerTable {
    pub fn build(h: &EdgePattern, lambda: f64, cfg: &PolymerConfig) -> Result<Self> {
        check_lambda(lambda)?;
        let ne = h.edge_count();
        if ne > MAX_SUBSET_EDGES {
            return Err(Error::PatternTooLarge(format!(
                "{ne} edges exceeds the subset-enumeration limit {MAX_SUBSET_EDGES}"
            )));
        }
        cfg.rule.check(h, lambda)?;
        let entries: Vec<Result<PolymerValue>> = (0..1u64 << ne)
            .into_par_iter()
            .map(|mask| {
                let bits = mask.count_ones() as i32;
                if subset_is_forest(h, mask) {
                    return Ok(PolymerValue::exact(lambda.powi(bits), ChiMethod::ClosedForm));
                }
                let sub = h.sub_pattern(mask);
                let v = chi_unchecked(&sub, lambda, cfg)?;
                assert_item_bounds(&sub, lambda, &v)?;
                Ok(v)
            })
            .collect();
        let mut table = PolymerTable {
            lambda,
            edges: ne,
            chi: Vec::with_capacity(entries.len()),
            psi: Vec::with_capacity(entries.len()),
            method: Vec::with_capacity(entries.len()),
            std_error: Vec::with_capacity(entries.len()),
        };
        for (mask, e) in entries.into_iter().enumerate() {
            let v = e?;
            table.chi.push(v.value);
            table.psi.push(v.value - lambda.powi(mask.count_ones() as i32));
            table.method.push(v.method);
            table.std_error.push(v.std_error);
        }
        Ok(table)
    }

    /// `Err(A) = sum_{B ⊆ A} (-1)^|B| psi(B)` for every subset `A`, via a
    /// double-double subset-sum transform.
    pub fn err_all(&self) -> Vec<f64> {
        let mut acc: Vec<DoubleDouble> = self
            .psi
            .iter()
            .enumerate()
            .map(|(mask, &p)| {
                DoubleDouble::from_f64(if mask.count_ones() % 2 == 0 { p } else { -p })
            })
            .collect();
        for bit in 0..self.edges {
            let step = 1usize << bit;
            for mask in 0..acc.len() {
                if mask & step != 0 {
                    acc[mask] = acc[mask].add(acc[mask ^ step]);
                }
            }
        }
        acc.into_iter().map(|x| x.to_f64()).collect()
    }

    pub fn full_mask(&self) -> usize {
        (1usize << self.edges) - 1
    }

    /// Worst method used by any entry.
    pub fn worst_method(&self) -> ChiMethod {
        self.method.iter().copied().max().unwrap_or(ChiMethod::ClosedForm)
    }
}

/// `Err(H, lambda) = sum_{A ⊆ H} (-1)^|A| psi(A)`.
pub fn err(h: &EdgePattern, lambda: f64) -> Result<f64> {
    err_with(h, lambda, &PolymerConfig::default())
}

pub fn err_with(h: &EdgePattern, lambda: f64, cfg: &PolymerConfig) -> Result<f64> {
    let t = PolymerTable::build(h, lambda, cfg)?;
    let mut s = NeumaierSum::new();
    for (mask, &p) in t.psi.iter().enumerate() {
        if p != 0.0 {
            s.add(if mask.count_ones() % 2 == 0 { p } else { -p });
        }
    }
    Ok(s.value())
}

/// `E[W_H]` in the one-dimensional graph of density `1 - lambda`, computed by
/// both `sum (-1)^|A| chi(A)` and `(1 - lambda)^|E| + Err`; they must agree.
pub fn expected_weight_1d(h: &EdgePattern, lambda: f64) -> Result<f64> {
    expected_weight_1d_with(h, lambda, &PolymerConfig::default())
}

pub fn expected_weight_1d_with(h: &EdgePattern, lambda: f64, cfg: &PolymerConfig) -> Result<f64> {
    let t = PolymerTable::build(h, lambda, cfg)?;
    expected_weight_1d_from_table(&t)
}

pub fn expected_weight_1d_from_table(t: &PolymerTable) -> Result<f64> {
    let mut direct = NeumaierSum::new();
    let mut magnitude = 0.0;
    let mut e = NeumaierSum::new();
    for (mask, (&c, &p)) in t.chi.iter().zip(&t.psi).enumerate() {
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        direct.add(sign * c);
        magnitude += c.abs();
        e.add(sign * p);
    }
    let direct = direct.value();
    let via_err = (1.0 - t.lambda).powi(t.edges as i32) + e.value();
    let tol = 1e-12 * direct.abs().max(via_err.abs()) + 64.0 * f64::EPSILON * magnitude;
    if (direct - via_err).abs() > tol {
        return Err(Error::Consistency(format!(
            "inclusion-exclusion routes disagree: {direct:e} vs {via_err:e}"
        )));
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(name: &str) -> EdgePattern {
        EdgePattern::builtin(name).unwrap()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&pat("edge"), 0.03).unwrap().value, 0.03);
        assert_eq!(chi(&pat("C3"), 0.01).unwrap().value, 0.0);
        let c4 = chi(&pat("C4"), 0.01).unwrap().value;
        assert!((c4 - 2.0 / 3.0 * 1e-6).abs() < 1e-20);
    }

    #[test]
    fn psi_examples() {
        let l = 0.01;
        assert_eq!(psi(&pat("P3"), l).unwrap().value, 0.0);
        assert!((psi(&pat("C3"), l).unwrap().value + l.powi(3)).abs() < 1e-22);
        let want = (2.0 / 3.0 - l) * l.powi(3);
        assert!((psi(&pat("C4"), l).unwrap().value - want).abs() < 1e-20);
    }

    #[test]
    fn err_and_expected_weight_examples() {
        let l = 0.01;
        assert_eq!(err(&pat("P3"), l).unwrap(), 0.0);
        assert!((err(&pat("C3"), l).unwrap() - l.powi(3)).abs() < 1e-20);
        // only A = C4 has psi != 0 and it enters with sign (-1)^4
        let c4 = (2.0 / 3.0 - l) * l.powi(3);
        assert!((err(&pat("C4"), l).unwrap() - c4).abs() < 1e-19);
        assert!((expected_weight_1d(&pat("edge"), l).unwrap() - 0.99).abs() < 1e-15);
        let c3 = 0.99f64.powi(3) + l.powi(3);
        assert!((expected_weight_1d(&pat("C3"), l).unwrap() - c3).abs() < 1e-15);
        let c4w = 0.99f64.powi(4) + (2.0 / 3.0 - l) * 1e-6;
        assert!((expected_weight_1d(&pat("C4"), l).unwrap() - c4w).abs() < 1e-15);
    }

    #[test]
    fn lattice_count_reproduces_cycles() {
        for m in [4usize, 6, 8, 10] {
            let r = lattice_ratio(&EdgePattern::cycle(m).unwrap()).unwrap();
            let want = phi(m - 1).value;
            assert!((r - want).abs() < 1e-14, "C{m}: {r} vs {want}");
        }
    }

    #[test]
    fn lattice_count_matches_tree_mc() {
        for name in ["K23", "theta", "K33"] {
            let b = pat(name);
            let exact = lattice_ratio(&b).unwrap();
            let (est, se) = tree_mc_ratio(&b, 400_000, 1).unwrap();
            assert!((est - exact).abs() < 4.0 * se, "{name}: {est} ± {se} vs {exact}");
        }
    }

    #[test]
    fn precondition_names_bound() {
        let e = chi(&pat("C6"), 0.05).unwrap_err();
        assert!(e.to_string().contains("1/(8*lambda)"));
        let ok = chi_with(&pat("C6"), 0.05, &PolymerConfig::with_rule(ValidityRule::NoWrap));
        assert!(ok.is_ok());
    }

    #[test]
    fn multiplicative_over_blocks() {
        let l = 0.02;
        let joined = EdgePattern::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)]).unwrap();
        let c4 = chi(&pat("C4"), l).unwrap().value;
        let v = chi(&joined, l).unwrap().value;
        assert!((v - c4 * l * l).abs() < 1e-24);
    }
}
