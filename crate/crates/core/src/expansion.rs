//! Expected unsigned and signed subgraph weights in the `L_inf` torus model.
//!
//! Coordinates are independent, so `E[W_H] = w_1(H)^d` where `w_1` is the
//! one-dimensional weight at density `1 - lambda`. Signed weights expand
//! `prod (G_e - p)` over edge subsets. Writing `w_1(A) = (1 - lambda)^|A| (1 + eps_A)`
//! the alternating sum collapses to
//! `p^|E| * sum_A (-1)^(|E|-|A|) expm1(d ln1p(eps_A))`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{phi, ModelParams, QSpec};
use crate::numeric::{binomial, factorial, Accumulator, DoubleDouble};
use crate::pattern::{pattern_facts, CanonKey, EdgePattern};
use crate::polymer::{expected_weight_1d_from_table, ChiMethod, PolymerConfig, PolymerTable};

/// Largest edge count for signed-weight subset expansion.
pub const MAX_SIGNED_EDGES: usize = 16;
/// Edge count from which signed sums switch to double-double accumulation.
pub const EXTENDED_PRECISION_EDGES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMethod {
    /// Exact up to floating-point rounding.
    Exact,
    /// Exact expansion, but some polymer values were Monte Carlo estimates.
    ExpansionWithMcPolymers,
    /// Asymptotic main term.
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightResult {
    pub value: f64,
    /// `ln(value)` when the value is positive.
    pub log_value: Option<f64>,
    pub leading_term: Option<f64>,
    pub method: WeightMethod,
}

impl WeightResult {
    fn new(value: f64, method: WeightMethod) -> Self {
        WeightResult {
            value,
            log_value: (value > 0.0).then(|| value.ln()),
            leading_term: None,
            method,
        }
    }
}

fn require_linfty(params: &ModelParams) -> Result<()> {
    if params.q != QSpec::Infinity {
        return Err(Error::UnsupportedGeometry(format!(
            "closed-form weights need q = inf, got q = {}",
            params.q
        )));
    }
    if !(params.lambda > 0.0 && params.lambda < 1.0) {
        return invalid(format!("lambda must lie in (0, 1), got {}", params.lambda));
    }
    Ok(())
}

fn method_of(table: &PolymerTable) -> WeightMethod {
    if table.worst_method() == ChiMethod::MonteCarlo {
        WeightMethod::ExpansionWithMcPolymers
    } else {
        WeightMethod::Exact
    }
}

/// `E[W_H] = w_1(H)^d`, evaluated as `exp(d ln w_1)`.
pub fn expected_weight(h: &EdgePattern, params: &ModelParams) -> Result<WeightResult> {
    expected_weight_with(h, params, &PolymerConfig::default())
}

pub fn expected_weight_with(
    h: &EdgePattern,
    params: &ModelParams,
    cfg: &PolymerConfig,
) -> Result<WeightResult> {
    require_linfty(params)?;
    if h.is_empty() {
        return Ok(WeightResult::new(1.0, WeightMethod::Exact));
    }
    let table = PolymerTable::build(h, params.lambda, cfg)?;
    let w1 = expected_weight_1d_from_table(&table)?;
    let log_value = params.d as f64 * w1.ln();
    Ok(WeightResult {
        value: log_value.exp(),
        log_value: Some(log_value),
        leading_term: None,
        method: method_of(&table),
    })
}

/// `E[prod_{e in H} (G_e - p)]`.
pub fn signed_weight(h: &EdgePattern, params: &ModelParams) -> Result<WeightResult> {
    signed_weight_with(h, params, &PolymerConfig::default())
}

pub fn signed_weight_with(
    h: &EdgePattern,
    params: &ModelParams,
    cfg: &PolymerConfig,
) -> Result<WeightResult> {
    require_linfty(params)?;
    let ne = h.edge_count();
    if ne > MAX_SIGNED_EDGES {
        return Err(Error::PatternTooLarge(format!(
            "signed weights limited to {MAX_SIGNED_EDGES} edges, got {ne}"
        )));
    }
    if ne == 0 {
        return Ok(WeightResult::new(1.0, WeightMethod::Exact));
    }
    let table = PolymerTable::build(h, params.lambda, cfg)?;
    let sum = signed_sum_from_table(&table, params.d);
    let value = params.p.powi(ne as i32) * sum;
    Ok(WeightResult::new(value, method_of(&table)))
}

/// `sum_A (-1)^(|E|-|A|) expm1(d ln1p(eps_A))`.
fn signed_sum_from_table(table: &PolymerTable, d: usize) -> f64 {
    let errs = table.err_all();
    let ne = table.edges;
    let ln_base = (-table.lambda).ln_1p();
    let mut acc = Accumulator::new(ne >= EXTENDED_PRECISION_EDGES);
    for (mask, &e) in errs.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        let bits = mask.count_ones() as i32;
        let eps = e / (bits as f64 * ln_base).exp();
        let term = (d as f64 * eps.ln_1p()).exp_m1();
        if (ne as i32 - bits) % 2 == 0 {
            acc.add(term);
        } else {
            acc.add(-term);
        }
    }
    acc.value()
}

/// Literal subset expansion `sum_A (-p)^(|E|-|A|) E[W_A]` in double-double;
/// loses accuracy for large `d` and serves as a cross-check.
pub fn signed_weight_direct(h: &EdgePattern, params: &ModelParams, cfg: &PolymerConfig) -> Result<f64> {
    require_linfty(params)?;
    let ne = h.edge_count();
    if ne > MAX_SIGNED_EDGES {
        return Err(Error::PatternTooLarge(format!("{ne} edges")));
    }
    let table = PolymerTable::build(h, params.lambda, cfg)?;
    let errs = table.err_all();
    let mut acc = DoubleDouble::ZERO;
    for (mask, &e) in errs.iter().enumerate() {
        let bits = mask.count_ones() as i32;
        let w1 = (1.0 - params.lambda).powi(bits) + e;
        let w = (params.d as f64 * w1.ln()).exp();
        let coef = (-params.p).powi(ne as i32 - bits);
        acc = acc.add_f64(coef * w);
    }
    Ok(acc.to_f64())
}

fn check_cycle_length(m: usize, params: &ModelParams, cfg: &PolymerConfig) -> Result<()> {
    if m < 3 {
        return invalid(format!("cycle length must be >= 3, got {m}"));
    }
    cfg.rule.check(&EdgePattern::cycle(m)?, params.lambda)
}

/// Leading term of the signed cycle weight with its remainder magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleAsymptotic {
    pub leading: f64,
    /// `p^m d^2 lambda^(2m)` (odd) or `p^m d^2 lambda^(2(m-1))` (even).
    pub remainder_bound: f64,
}

/// Odd `m`: `p^m d lambda^m / (1-lambda)^m`.
/// Even `m`: `p^m d (lambda^(m-1) phi(m-1) - lambda^m) / (1-lambda)^m`.
pub fn signed_cycle_asymptotic(m: usize, params: &ModelParams) -> Result<CycleAsymptotic> {
    signed_cycle_asymptotic_with(m, params, &PolymerConfig::default())
}

pub fn signed_cycle_asymptotic_with(
    m: usize,
    params: &ModelParams,
    cfg: &PolymerConfig,
) -> Result<CycleAsymptotic> {
    require_linfty(params)?;
    check_cycle_length(m, params, cfg)?;
    let (l, d, p) = (params.lambda, params.d as f64, params.p);
    let mi = m as i32;
    let scale = p.powi(mi) / (1.0 - l).powi(mi);
    let (leading, rem_exp) = if m % 2 == 1 {
        (scale * d * l.powi(mi), 2 * mi)
    } else {
        (
            scale * d * (l.powi(mi - 1) * phi(m - 1).value - l.powi(mi)),
            2 * (mi - 1),
        )
    };
    Ok(CycleAsymptotic {
        leading,
        remainder_bound: p.powi(mi) * d * d * l.powi(rem_exp),
    })
}

/// Default for the `k^(m+2) lambda` hypothesis check.
pub const GRAPH_ASYMPTOTIC_TOLERANCE: f64 = 0.01;

/// Main term of `E[W_H]` from the girth `m` and cycle counts `N(u)`:
/// odd `m`: `p^k (1 + d (N(m) + phi(m) N(m+1)) lambda^m)`,
/// even `m`: `p^k (1 + d phi(m-1) N(m) lambda^(m-1))`.
pub fn unsigned_graph_asymptotic(h: &EdgePattern, params: &ModelParams) -> Result<WeightResult> {
    unsigned_graph_asymptotic_with_tolerance(h, params, GRAPH_ASYMPTOTIC_TOLERANCE)
}

/// As [`unsigned_graph_asymptotic`] with an explicit bound on `k^(m+2) lambda`.
pub fn unsigned_graph_asymptotic_with_tolerance(
    h: &EdgePattern,
    params: &ModelParams,
    tolerance: f64,
) -> Result<WeightResult> {
    require_linfty(params)?;
    let facts = pattern_facts(h)?;
    let k = h.edge_count() as i32;
    let pk = params.p.powi(k);
    let Some(m) = facts.girth else {
        let mut r = WeightResult::new(pk, WeightMethod::Asymptotic);
        r.leading_term = Some(pk);
        return Ok(r);
    };
    let product = (k as f64).powi(m as i32 + 2) * params.lambda;
    if product > tolerance {
        return Err(Error::Precondition(format!(
            "k^(m+2)*lambda = {k}^{}*{:.3e} = {product:.3e} exceeds {tolerance}",
            m + 2,
            params.lambda
        )));
    }
    let (l, d) = (params.lambda, params.d as f64);
    let n_m = facts.cycles_of_length(m) as f64;
    let correction = if m % 2 == 1 {
        let n_next = pattern_facts_capped_count(h, m + 1)?;
        d * (n_m + phi(m).value * n_next) * l.powi(m as i32)
    } else {
        d * phi(m - 1).value * n_m * l.powi(m as i32 - 1)
    };
    let value = pk * (1.0 + correction);
    let mut r = WeightResult::new(value, WeightMethod::Asymptotic);
    r.leading_term = Some(value);
    Ok(r)
}

fn pattern_facts_capped_count(h: &EdgePattern, len: usize) -> Result<f64> {
    let f = crate::pattern::pattern_facts_capped(h, len.max(h.vertex_count()))?;
    Ok(f.cycles_of_length(len) as f64)
}

/// `p^|E| ((ln d)^C / d)^(|V|/2)`, defined when `|E| <= (ln d)^(5/4) / ln ln d`.
pub fn signed_weight_bound(h: &EdgePattern, params: &ModelParams, c: f64) -> Result<f64> {
    let d = params.d as f64;
    let ln_d = d.ln();
    if ln_d.ln() <= 0.0 {
        return Err(Error::Precondition(format!(
            "bound needs ln ln d > 0, got d = {}",
            params.d
        )));
    }
    let cap = ln_d.powf(1.25) / ln_d.ln();
    if h.edge_count() as f64 > cap {
        return Err(Error::Precondition(format!(
            "|E(H)| = {} exceeds (ln d)^(5/4)/ln ln d = {cap:.3}",
            h.edge_count()
        )));
    }
    Ok(params.p.powi(h.edge_count() as i32)
        * (ln_d.powf(c) / d).powf(h.vertex_count() as f64 / 2.0))
}

/// Number of `m`-cycle subgraphs of `K_n`: `(m-1)!/2 * C(n, m)`.
pub fn cycle_copies(m: usize, n: usize) -> f64 {
    factorial(m as u64 - 1) / 2.0 * binomial(n as u64, m as u64)
}

/// `E[SC_{C_m}]` from the exact signed weight.
pub fn expected_signed_cycle_mean(m: usize, n: usize, params: &ModelParams) -> Result<f64> {
    expected_signed_cycle_mean_with(m, n, params, &PolymerConfig::default())
}

pub fn expected_signed_cycle_mean_with(
    m: usize,
    n: usize,
    params: &ModelParams,
    cfg: &PolymerConfig,
) -> Result<f64> {
    check_cycle_length(m, params, cfg)?;
    let sw = signed_weight_with(&EdgePattern::cycle(m)?, params, cfg)?;
    Ok(cycle_copies(m, n) * sw.value)
}

/// Second-order expansion of the mean in `L = ln(1/p)`:
/// `C3: C(n,3) p^3 (L^3/d^2 + 1.5 L^4/d^3)`,
/// `C4: 3 C(n,4) p^4 (phi(3) L^3/d^2 + 1.5 phi(3) L^4/d^3 - L^4/d^3)`.
pub fn refined_cycle_mean(stat: CycleStat, n: usize, p: f64, d: usize) -> f64 {
    let l = (1.0 / p).ln();
    let d = d as f64;
    match stat {
        CycleStat::C3 => {
            binomial(n as u64, 3) * p.powi(3) * (l.powi(3) / (d * d) + 1.5 * l.powi(4) / d.powi(3))
        }
        CycleStat::C4 => {
            let phi3 = phi(3).value;
            3.0 * binomial(n as u64, 4)
                * p.powi(4)
                * (phi3 * l.powi(3) / (d * d) + 1.5 * phi3 * l.powi(4) / d.powi(3)
                    - l.powi(4) / d.powi(3))
        }
    }
}

/// The two cycle statistics used by the tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleStat {
    C3,
    C4,
}

impl CycleStat {
    pub fn length(&self) -> usize {
        match self {
            CycleStat::C3 => 3,
            CycleStat::C4 => 4,
        }
    }

    pub fn pattern(&self) -> EdgePattern {
        EdgePattern::cycle(self.length()).expect("m >= 3")
    }

    pub fn copies(&self, n: usize) -> f64 {
        cycle_copies(self.length(), n)
    }
}

impl std::str::FromStr for CycleStat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "c3" | "triangle" | "3" => Ok(CycleStat::C3),
            "c4" | "4cycle" | "four-cycle" | "4" => Ok(CycleStat::C4),
            other => Err(Error::Parse(format!("unknown statistic '{other}' (expected C3 or C4)"))),
        }
    }
}

impl std::fmt::Display for CycleStat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "C{}", self.length())
    }
}

/// Which variance to predict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum VarianceModel {
    /// Exact null variance `copies * (p - p^2)^|E|`.
    Er,
    /// Null term plus `constant` times the order-of-magnitude correction.
    RggBand { constant: f64 },
    /// Exact geometric variance from the overlap decomposition.
    RggExact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariancePrediction {
    pub value: f64,
    /// Width of the uncertainty band (zero for exact models).
    pub band: f64,
}

/// `C(n,3)(p-p^2)^3` or `3 C(n,4)(p-p^2)^4`.
pub fn er_variance(stat: CycleStat, n: usize, p: f64) -> f64 {
    stat.copies(n) * (p - p * p).powi(stat.length() as i32)
}

pub fn variance_predictor(
    stat: CycleStat,
    n: usize,
    params: &ModelParams,
    model: VarianceModel,
) -> Result<VariancePrediction> {
    variance_predictor_with(stat, n, params, model, &PolymerConfig::default())
}

pub fn variance_predictor_with(
    stat: CycleStat,
    n: usize,
    params: &ModelParams,
    model: VarianceModel,
    cfg: &PolymerConfig,
) -> Result<VariancePrediction> {
    let p = params.p;
    let er = er_variance(stat, n, p);
    match model {
        VarianceModel::Er => Ok(VariancePrediction { value: er, band: 0.0 }),
        VarianceModel::RggBand { constant } => {
            require_linfty(params)?;
            let (nf, d) = (n as f64, params.d as f64);
            let corr = match stat {
                CycleStat::C3 => nf.powi(4) * p.powi(5) / (d * d),
                CycleStat::C4 => nf.powi(5) * p.powi(6) / (d * d) + nf.powi(6) * p.powi(7) / d.powi(3),
            };
            Ok(VariancePrediction {
                value: er + constant * corr,
                band: constant * corr,
            })
        }
        VarianceModel::RggExact => {
            let value = exact_signed_count_variance(&stat.pattern(), n, &|f: &EdgePattern| {
                signed_weight_with(f, params, cfg).map(|w| w.value)
            }, p)?;
            Ok(VariancePrediction { value, band: 0.0 })
        }
    }
}

/// All labeled copies of `h` inside `K_k`, as sorted edge lists.
fn labeled_copies(h: &EdgePattern, k: usize) -> Vec<Vec<(usize, usize)>> {
    let v = h.vertex_count();
    let mut out: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut perm: Vec<usize> = Vec::with_capacity(v);
    let mut used = vec![false; k];
    fn rec(
        h: &EdgePattern,
        k: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if perm.len() == h.vertex_count() {
            let mut e: Vec<(usize, usize)> = h
                .edges()
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            e.sort_unstable();
            out.push(e);
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                perm.push(x);
                rec(h, k, perm, used, out);
                perm.pop();
                used[x] = false;
            }
        }
    }
    if v <= k {
        rec(h, k, &mut perm, &mut used, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// `Var[SC_H]` over `K_n` given a signed-weight oracle. Pairs of copies
/// sharing at most one vertex are independent by translation invariance, so
/// only pairs whose union spans `k <= 2|V| - 2` vertices contribute, each
/// vertex set counted `C(n, k)` times. Shared edges are expanded with
/// `(G - p)^2 = (1 - 2p)(G - p) + p(1 - p)`.
pub fn exact_signed_count_variance(
    h: &EdgePattern,
    n: usize,
    signed: &dyn Fn(&EdgePattern) -> Result<f64>,
    p: f64,
) -> Result<f64> {
    let v = h.vertex_count();
    if v > 8 {
        return Err(Error::PatternTooLarge(format!(
            "overlap variance limited to 8 vertices, got {v}"
        )));
    }
    let mut memo: HashMap<CanonKey, f64> = HashMap::new();
    let mut sw = |edges: &[(usize, usize)]| -> Result<f64> {
        if edges.is_empty() {
            return Ok(1.0);
        }
        let pat = EdgePattern::from_edges(edges)?;
        let key = pat.canonical()?.key;
        if let Some(&x) = memo.get(&key) {
            return Ok(x);
        }
        let x = signed(&pat)?;
        memo.insert(key, x);
        Ok(x)
    };
    let mean = sw(h.edges())?;
    let mut total = 0.0;
    for k in v..=(2 * v).saturating_sub(2).min(n) {
        let copies = labeled_copies(h, k);
        let verts = |e: &[(usize, usize)]| e.iter().fold(0u64, |m, &(a, b)| m | 1 << a | 1 << b);
        let full = (1u64 << k) - 1;
        let mut acc = 0.0;
        for c1 in &copies {
            let v1 = verts(c1);
            for c2 in &copies {
                let v2 = verts(c2);
                if v1 | v2 != full || (v1 & v2).count_ones() < 2 {
                    continue;
                }
                let shared: Vec<(usize, usize)> = c1.iter().filter(|e| c2.contains(e)).copied().collect();
                let mut sym: Vec<(usize, usize)> = c1
                    .iter()
                    .chain(c2)
                    .filter(|e| !shared.contains(e))
                    .copied()
                    .collect();
                sym.sort_unstable();
                let s = shared.len();
                let mut joint = 0.0;
                for t in 0u64..(1 << s) {
                    let mut f = sym.clone();
                    f.extend((0..s).filter(|&i| t >> i & 1 == 1).map(|i| shared[i]));
                    let kept = t.count_ones() as i32;
                    joint += (1.0 - 2.0 * p).powi(kept) * (p * (1.0 - p)).powi(s as i32 - kept) * sw(&f)?;
                }
                acc += joint - mean * mean;
            }
        }
        total += binomial(n as u64, k as u64) * acc;
    }
    Ok(total)
}
