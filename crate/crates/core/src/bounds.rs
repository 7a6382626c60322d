//! Evaluators behind the indistinguishability bounds: moments of the
//! self-convolution `sigma * sigma`, the KL tensorization sum, nested Monte
//! Carlo for `gamma = sigma * sigma - p^2`, small-ball probabilities of
//! `sum U_i^q`, Boolean influences on the hypercube, and the low-degree
//! advantage over small patterns.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::expansion::signed_weight_with;
use crate::geometry::{circ_norm, ModelParams, QSpec};
use crate::graph::{unit_f64, uniform_torus, within, RngSpec, SigmaSpec, MAX_TABLE_DIM};
use crate::numeric::{binomial, falling_factorial, wilson_interval, NeumaierSum};
use crate::pattern::{CanonKey, EdgePattern};
use crate::polymer::{PolymerConfig, ValidityRule};

/// One-dimensional overlap `P_z[|z|_C <= tau, |x - z|_C <= tau]` with `tau = 1 - lambda`.
pub fn overlap_f(x: f64, lambda: f64) -> f64 {
    let r = circ_norm(x);
    if r <= 2.0 * lambda {
        1.0 - lambda - r / 2.0
    } else {
        1.0 - 2.0 * lambda
    }
}

/// `E[f^t]` over a uniform circle point:
/// `2/(t+1) (1-lambda)^(t+1) + (t-1)/(t+1) (1-2 lambda)^(t+1)`.
pub fn conv_bracket(t: usize, lambda: f64) -> f64 {
    let t1 = t as f64 + 1.0;
    2.0 / t1 * (1.0 - lambda).powf(t1) + (t1 - 2.0) / t1 * (1.0 - 2.0 * lambda).powf(t1)
}

/// Largest power kept in the exact series for [`bracket_excess`].
const SERIES_TERMS: usize = 16;

/// `conv_bracket(t) / (1 - lambda)^(2t) - 1`, accurate when it is tiny.
///
/// With `r = lambda / (1 - lambda)` the ratio is the polynomial
/// `((1+r)^(t-1) (2 + (t-1)(1-r)^(t+1))) / (t+1)`, whose constant term is 1
/// and whose `r` and `r^2` coefficients vanish.
pub fn bracket_excess(t: usize, lambda: f64) -> f64 {
    if t <= 1 {
        return 0.0;
    }
    let r = lambda / (1.0 - lambda);
    if let Some(v) = excess_series(t, r) {
        return v;
    }
    let tm1 = t as f64 - 1.0;
    let a = (tm1 * r.ln_1p()).exp_m1();
    let b = (tm1 * (-r * r).ln_1p() + 2.0 * (-r).ln_1p()).exp_m1();
    (2.0 * a + tm1 * b) / (t as f64 + 1.0)
}

fn binomial_row(n: u64, len: usize) -> Option<Vec<i128>> {
    let mut row = vec![0i128; len];
    let mut c: i128 = 1;
    for (k, slot) in row.iter_mut().enumerate() {
        if k as u64 > n {
            break;
        }
        *slot = c;
        c = c.checked_mul((n - k as u64) as i128)? / (k as i128 + 1);
    }
    Some(row)
}

/// Exact-coefficient series, or `None` when its tail is not negligible.
fn excess_series(t: usize, r: f64) -> Option<f64> {
    let tu = t as u64;
    let len = (SERIES_TERMS + 2).min(2 * t + 1);
    let low = binomial_row(tu - 1, len)?;
    let high = binomial_row(tu + 1, len)?;
    let mut coeffs = Vec::with_capacity(len);
    for j in 0..len {
        let mut conv: i128 = 0;
        for i in 0..=j {
            let term = low[i].checked_mul(high[j - i])?;
            conv = if (j - i) % 2 == 0 {
                conv.checked_add(term)?
            } else {
                conv.checked_sub(term)?
            };
        }
        let num = conv.checked_mul(tu as i128 - 1)?.checked_add(2 * low[j])?;
        coeffs.push(num);
    }
    let kept = len.min(SERIES_TERMS + 1);
    let mut acc = 0.0;
    for j in (3..kept).rev() {
        acc = acc * r + coeffs[j] as f64;
    }
    let value = acc * r.powi(3) / (t as f64 + 1.0);
    if kept < 2 * t + 1 {
        // |c_j| <= C(2t, j) (t-1)/(t+1) + 2 C(t-1, j)/(t+1); tail ratio <= 2tr/(j+1)
        let j = kept as u64;
        let head = (binomial(2 * tu, j) + binomial(tu - 1, j)) * r.powi(j as i32);
        let ratio = 2.0 * t as f64 * r / (j as f64 + 1.0);
        if ratio >= 0.5 {
            return None;
        }
        let tail = head / (1.0 - ratio);
        if !(tail <= 1e-15 * value.abs()) {
            return None;
        }
    }
    Some(value)
}

/// `E[(sigma * sigma)^t]` for the `L_inf` model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvMoment {
    pub t: usize,
    pub value: f64,
    pub ln_value: f64,
    /// `value / p^(2t) - 1`.
    pub excess: f64,
    /// `t lambda < 1/2`, where the `p^(2t)(1 + Theta(d lambda^3 t^2))` scaling applies.
    pub in_asymptotic_regime: bool,
}

fn require_linfty(params: &ModelParams) -> Result<()> {
    if params.q != QSpec::Infinity {
        return Err(Error::UnsupportedGeometry(format!(
            "exact convolution moments need q = inf, got q = {}",
            params.q
        )));
    }
    if !(params.lambda > 0.0 && params.lambda <= 0.5) {
        return invalid(format!("lambda must lie in (0, 1/2], got {}", params.lambda));
    }
    Ok(())
}

/// `conv_bracket(t)^d` in log space.
pub fn sigma_conv_moment_linfty(t: usize, params: &ModelParams) -> Result<ConvMoment> {
    require_linfty(params)?;
    if t < 1 {
        return invalid("moment order must be >= 1");
    }
    let d = params.d as f64;
    let lambda = params.lambda;
    let log_excess = d * bracket_excess(t, lambda).ln_1p();
    let ln_value = 2.0 * t as f64 * d * (-lambda).ln_1p() + log_excess;
    Ok(ConvMoment {
        t,
        value: ln_value.exp(),
        ln_value,
        excess: log_excess.exp_m1(),
        in_asymptotic_regime: (t as f64) * lambda < 0.5,
    })
}

/// Moments for `t = 1..=t_max` with the parameters they were computed at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub params: ModelParams,
    pub moments: Vec<ConvMoment>,
}

pub fn moment_table_linfty(params: &ModelParams, t_max: usize) -> Result<MomentTable> {
    let moments = (1..=t_max)
        .map(|t| sigma_conv_moment_linfty(t, params))
        .collect::<Result<_>>()?;
    Ok(MomentTable {
        params: *params,
        moments,
    })
}

/// Largest `n` accepted by [`kl_bound`].
pub const KL_MAX_N: usize = 4000;
/// Terms smaller than this are dropped and counted in the truncation bound.
const KL_TERM_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlReport {
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub kl: f64,
    /// Pinsker: `min(1, sqrt(kl / 2))`.
    pub tv_bound: f64,
    pub truncated_terms: u64,
    pub truncation_bound: f64,
}

/// `sum_{k<n} ln E[(1 + gamma / (p(1-p)))^k]`, expanded as
/// `1 + sum_t C(k,t) a^(k-t) b^t eps_t` with `a = (1-2p)/(1-p)`,
/// `b = p/(1-p)` and `eps_t = E[(sigma*sigma)^t] / p^(2t) - 1`.
pub fn kl_bound(n: usize, params: &ModelParams) -> Result<KlReport> {
    require_linfty(params)?;
    if n > KL_MAX_N {
        return invalid(format!("kl_bound supports n <= {KL_MAX_N}, got {n}"));
    }
    let p = params.p;
    if !(p > 0.0 && p < 1.0) {
        return invalid(format!("p must lie in (0, 1), got {p}"));
    }
    let d = params.d as f64;
    let a = (1.0 - 2.0 * p) / (1.0 - p);
    let ln_a = a.abs().ln();
    let ln_b = (p / (1.0 - p)).ln();
    let ln_eps: Vec<f64> = (0..n.max(1))
        .map(|t| {
            let x = d * bracket_excess(t, params.lambda).ln_1p();
            if x > 30.0 {
                // ln(e^x - 1) without overflowing e^x
                x + (-(-x).exp()).ln_1p()
            } else if x > 0.0 {
                x.exp_m1().ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let mut ln_fact = vec![0.0f64; n.max(1) + 1];
    for i in 1..ln_fact.len() {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let floor = KL_TERM_FLOOR.ln();
    let per_k: Vec<(f64, u64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut logs: Vec<(f64, bool)> = Vec::new();
            for t in 2..=k {
                if ln_eps[t] == f64::NEG_INFINITY {
                    continue;
                }
                let rest = k - t;
                if a == 0.0 && rest > 0 {
                    continue;
                }
                let ln_pow_a = if rest == 0 { 0.0 } else { rest as f64 * ln_a };
                let l = ln_fact[k] - ln_fact[t] - ln_fact[rest] + ln_pow_a + t as f64 * ln_b + ln_eps[t];
                logs.push((l, a < 0.0 && rest % 2 == 1));
            }
            let mut dropped = 0u64;
            let max = logs.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
            if max == f64::NEG_INFINITY {
                return (0.0, 0);
            }
            let mut acc = NeumaierSum::new();
            let mut magnitude = 0.0;
            for &(l, neg) in &logs {
                if l < floor {
                    dropped += 1;
                    continue;
                }
                let v = (l - max).exp();
                magnitude += v;
                acc.add(if neg { -v } else { v });
            }
            let s = max.exp() * acc.value();
            // rounding in an alternating sum scales with the sum of magnitudes
            let noise = 64.0 * f64::EPSILON * max.exp() * magnitude;
            if !(noise <= 1e-6 * (1.0 + s).abs()) {
                return (f64::NAN, dropped);
            }
            (s.ln_1p(), dropped)
        })
        .collect();
    if per_k.iter().any(|x| x.0.is_nan()) {
        return Err(Error::Consistency(
            "KL expansion is ill-conditioned at these parameters (alternating terms cancel beyond \
             double precision; typical for p > 1/2 with large n)"
                .into(),
        ));
    }
    let kl: f64 = per_k.iter().map(|x| x.0).collect::<NeumaierSum>().value();
    let truncated_terms: u64 = per_k.iter().map(|x| x.1).sum();
    Ok(KlReport {
        n,
        d: params.d,
        p,
        kl,
        tv_bound: (kl.max(0.0) / 2.0).sqrt().min(1.0),
        truncated_terms,
        truncation_bound: truncated_terms as f64 * KL_TERM_FLOOR,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Outer samples per independent substream.
const GAMMA_CHUNK: u64 = 256;

/// Nested Monte Carlo for `E[gamma^t]`. The inner budget is split into `t`
/// independent groups whose mean estimates of `gamma(x)` are multiplied, which
/// is unbiased for `gamma(x)^t`.
pub fn gamma_moment_mc(
    params: &ModelParams,
    t: usize,
    outer: u64,
    inner: u64,
    seeds: RngSpec,
) -> Result<McEstimate> {
    if !(1..=4).contains(&t) {
        return invalid(format!("moment order must lie in 1..=4, got {t}"));
    }
    if t >= 2 && inner < 2 {
        return invalid(format!("inner budget must be >= 2 for t >= 2, got {inner}"));
    }
    if inner < t as u64 {
        return invalid(format!("inner budget {inner} is smaller than t = {t}"));
    }
    if outer < 2 {
        return invalid("at least two outer samples are required");
    }
    let d = params.d;
    let origin = vec![0.0; d];
    let group = inner / t as u64;
    let p2 = params.p * params.p;
    let chunks = outer.div_ceil(GAMMA_CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeds.replicate(c).rng();
            let len = GAMMA_CHUNK.min(outer - c * GAMMA_CHUNK);
            let (mut s, mut s2) = (NeumaierSum::new(), NeumaierSum::new());
            let mut z = vec![0.0; d];
            for _ in 0..len {
                let x = uniform_torus(1, d, &mut rng);
                let mut prod = 1.0;
                for _ in 0..t {
                    let mut hits = 0u64;
                    for _ in 0..group {
                        for zi in z.iter_mut() {
                            *zi = 2.0 * unit_f64(&mut rng);
                        }
                        if within(&z, &origin, params.q, params.tau) && within(&x, &z, params.q, params.tau) {
                            hits += 1;
                        }
                    }
                    prod *= hits as f64 / group as f64 - p2;
                }
                s.add(prod);
                s2.add(prod * prod);
            }
            (s.value(), s2.value())
        })
        .collect();
    let n = outer as f64;
    let sum: NeumaierSum = sums.iter().map(|x| x.0).collect();
    let sum2: NeumaierSum = sums.iter().map(|x| x.1).collect();
    let mean = sum.value() / n;
    let var = ((sum2.value() - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(McEstimate {
        estimate: mean,
        std_error: (var / n).sqrt(),
        samples: outer,
    })
}

/// Sorted Monte Carlo draws of `sum_{i<d} U_i^q` (`d - 1` terms).
#[derive(Clone, Debug)]
pub struct SmallBallSampler {
    pub d: usize,
    pub q: f64,
    sums: Vec<f64>,
}

const SMALL_BALL_CHUNK: u64 = 1 << 14;

impl SmallBallSampler {
    pub fn new(d: usize, q: f64, samples: u64, seeds: RngSpec) -> Result<Self> {
        if d < 2 {
            return invalid(format!("need d >= 2, got {d}"));
        }
        if !(q >= 1.0 && q.is_finite()) {
            return invalid(format!("need finite q >= 1, got {q}"));
        }
        if samples == 0 {
            return invalid("samples must be positive");
        }
        let chunks = samples.div_ceil(SMALL_BALL_CHUNK);
        let parts: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = seeds.replicate(c).rng();
                let len = SMALL_BALL_CHUNK.min(samples - c * SMALL_BALL_CHUNK);
                (0..len)
                    .map(|_| (1..d).map(|_| unit_f64(&mut rng).powf(q)).sum())
                    .collect()
            })
            .collect();
        let mut sums: Vec<f64> = parts.concat();
        sums.sort_by(f64::total_cmp);
        Ok(SmallBallSampler { d, q, sums })
    }

    pub fn samples(&self) -> usize {
        self.sums.len()
    }

    /// Empirical quantile of the sum.
    pub fn quantile(&self, prob: f64) -> f64 {
        let i = ((prob.clamp(0.0, 1.0) * (self.sums.len() - 1) as f64).round()) as usize;
        self.sums[i]
    }

    pub fn check(&self, a: f64, b: f64) -> Result<SmallBallReport> {
        if !(0.0 <= a && a <= b) {
            return invalid(format!("need 0 <= a <= b, got [{a}, {b}]"));
        }
        let lo = self.sums.partition_point(|&s| s < a);
        let hi = self.sums.partition_point(|&s| s <= b);
        let hits = (hi - lo) as u64;
        let n = self.sums.len() as u64;
        let prob = hits as f64 / n as f64;
        let se = (prob * (1.0 - prob) / n as f64).sqrt();
        let e = (self.d - 1) as f64 / self.q;
        let lemma_bound = b.powf(e) - a.powf(e);
        let informative = lemma_bound <= 1.0;
        Ok(SmallBallReport {
            d: self.d,
            q: self.q,
            a,
            b,
            samples: n,
            probability: prob,
            std_error: se,
            wilson: wilson_interval(hits, n, 0.95),
            lemma_bound,
            lemma_informative: informative,
            lemma_holds: prob - 4.0 * se <= lemma_bound,
            anticoncentration_diagnostic: (-(self.d as f64) / (8.0 * self.q)).exp()
                + (b - a) * (self.q / self.d as f64).sqrt(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallBallReport {
    pub d: usize,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    pub samples: u64,
    pub probability: f64,
    pub std_error: f64,
    pub wilson: (f64, f64),
    /// `b^((d-1)/q) - a^((d-1)/q)`.
    pub lemma_bound: f64,
    /// False when the bound exceeds 1 and holds trivially.
    pub lemma_informative: bool,
    /// Estimate minus four standard errors stays at or below the bound.
    pub lemma_holds: bool,
    /// `exp(-d/(8q)) + (b - a) sqrt(q/d)`, reported only.
    pub anticoncentration_diagnostic: f64,
}

pub fn small_ball_check(
    d: usize,
    q: f64,
    a: f64,
    b: f64,
    samples: u64,
    seeds: RngSpec,
) -> Result<SmallBallReport> {
    SmallBallSampler::new(d, q, samples, seeds)?.check(a, b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfluenceVector {
    pub d: usize,
    pub influences: Vec<f64>,
    pub total: f64,
    pub sum_squares: f64,
    pub max: f64,
}

/// Masks per parallel chunk in influence enumeration.
const INFLUENCE_CHUNK: u64 = 1 << 14;

/// `Inf_i = E[(f(x) - f(x with coordinate i flipped))^2] / 4` by full enumeration.
pub fn hypercube_influences(sigma: &SigmaSpec, d: usize) -> Result<InfluenceVector> {
    if d == 0 || d > MAX_TABLE_DIM {
        return Err(Error::UnsupportedGeometry(format!(
            "exact influences need 1 <= d <= {MAX_TABLE_DIM}, got {d}"
        )));
    }
    sigma.validate(d)?;
    let total_masks = 1u64 << d;
    let chunks = total_masks.div_ceil(INFLUENCE_CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; d];
            let end = ((c + 1) * INFLUENCE_CHUNK).min(total_masks);
            for mask in c * INFLUENCE_CHUNK..end {
                let f = sigma.eval(d, mask);
                for (i, a) in acc.iter_mut().enumerate() {
                    if mask >> i & 1 == 0 {
                        let diff = f - sigma.eval(d, mask | 1 << i);
                        *a += diff * diff;
                    }
                }
            }
            acc
        })
        .collect();
    let mut sums = vec![0.0; d];
    for part in &parts {
        for (s, v) in sums.iter_mut().zip(part) {
            *s += v;
        }
    }
    // each unordered pair {x, x^i} was visited once: divide by 2^(d-1) pairs and 4
    let scale = 1.0 / (total_masks as f64 * 2.0);
    let influences: Vec<f64> = sums.iter().map(|s| s * scale).collect();
    Ok(InfluenceVector {
        d,
        total: influences.iter().sum(),
        sum_squares: influences.iter().map(|x| x * x).sum(),
        max: influences.iter().copied().fold(0.0, f64::max),
        influences,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypercubeTvReport {
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub influences: InfluenceVector,
    /// `n^3 sum Inf_i^2 / (p^2 (1-p)^2)`, without the unknown constant.
    pub raw_ratio: f64,
    /// For threshold `sigma`: `max Inf_i * d / (p^2 ln(1/p))`.
    pub threshold_constant: Option<f64>,
}

pub fn hypercube_tv_bound(n: usize, sigma: &SigmaSpec, d: usize) -> Result<HypercubeTvReport> {
    let influences = hypercube_influences(sigma, d)?;
    let p = sigma.density(d);
    let denom = p * p * (1.0 - p) * (1.0 - p);
    let raw_ratio = if influences.sum_squares == 0.0 {
        0.0
    } else if denom == 0.0 {
        f64::INFINITY
    } else {
        (n as f64).powi(3) * influences.sum_squares / denom
    };
    let threshold_constant = match sigma {
        SigmaSpec::Threshold { .. } if p > 0.0 && p < 1.0 => {
            Some(influences.max * d as f64 / (p * p * (1.0 / p).ln()))
        }
        _ => None,
    };
    Ok(HypercubeTvReport {
        n,
        d,
        p,
        influences,
        raw_ratio,
        threshold_constant,
    })
}

pub const ADVANTAGE_MAX_VERTICES: usize = 8;
pub const ADVANTAGE_MAX_EDGES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvantageTerm {
    pub pattern: String,
    pub vertices: usize,
    pub edges: usize,
    /// Copies in `K_n`: `n! / ((n - v)! |Aut|)`.
    pub copies: f64,
    pub signed_weight: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvantageReport {
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub max_edges: usize,
    pub max_vertices: usize,
    pub value: f64,
    pub terms: Vec<AdvantageTerm>,
}

/// Isomorphism classes with minimum degree 2, at most `vmax` vertices and
/// `1..=max_edges` edges, in canonical-key order.
pub fn min_degree_two_classes(vmax: usize, max_edges: usize) -> Result<Vec<EdgePattern>> {
    if vmax > ADVANTAGE_MAX_VERTICES || max_edges > ADVANTAGE_MAX_EDGES {
        return Err(Error::PatternTooLarge(format!(
            "pattern enumeration limited to {ADVANTAGE_MAX_VERTICES} vertices and \
             {ADVANTAGE_MAX_EDGES} edges, got {vmax} and {max_edges}"
        )));
    }
    let mut found: HashMap<CanonKey, EdgePattern> = HashMap::new();
    for v in 3..=vmax.min(max_edges) {
        let pairs: Vec<(usize, usize)> =
            (0..v).flat_map(|a| ((a + 1)..v).map(move |b| (a, b))).collect();
        let m = pairs.len();
        for k in v..=max_edges.min(m) {
            // Gosper's hack over k-subsets of the m vertex pairs
            let mut set: u64 = (1u64 << k) - 1;
            let limit = 1u64 << m;
            while set < limit {
                let mut deg = [0u8; ADVANTAGE_MAX_VERTICES];
                let mut bits = set;
                while bits != 0 {
                    let e = bits.trailing_zeros() as usize;
                    deg[pairs[e].0] += 1;
                    deg[pairs[e].1] += 1;
                    bits &= bits - 1;
                }
                if deg[..v].iter().all(|&x| x >= 2) {
                    let edges: Vec<(usize, usize)> =
                        (0..m).filter(|&e| set >> e & 1 == 1).map(|e| pairs[e]).collect();
                    let pat = EdgePattern::from_edges(&edges)?;
                    let key = pat.canonical()?.key;
                    if let std::collections::hash_map::Entry::Vacant(slot) = found.entry(key) {
                        let canon = slot.key().to_pattern();
                        slot.insert(canon);
                    }
                }
                let c = set & set.wrapping_neg();
                let r = set + c;
                set = (((r ^ set) >> 2) / c) | r;
            }
        }
    }
    let mut keys: Vec<CanonKey> = found.keys().cloned().collect();
    keys.sort();
    Ok(keys.into_iter().map(|k| found.remove(&k).expect("present")).collect())
}

/// `sum_H copies(H) SW_H^2 / (p(1-p))^|E(H)|` over min-degree-2 classes.
pub fn low_degree_advantage_small(
    n: usize,
    params: &ModelParams,
    max_edges: usize,
    vmax: usize,
) -> Result<AdvantageReport> {
    low_degree_advantage_small_with(
        n,
        params,
        max_edges,
        vmax,
        &PolymerConfig::with_rule(ValidityRule::NoWrap),
    )
}

pub fn low_degree_advantage_small_with(
    n: usize,
    params: &ModelParams,
    max_edges: usize,
    vmax: usize,
    cfg: &PolymerConfig,
) -> Result<AdvantageReport> {
    require_linfty(params)?;
    let p = params.p;
    if !(p > 0.0 && p < 1.0) {
        return invalid(format!("p must lie in (0, 1), got {p}"));
    }
    let classes = min_degree_two_classes(vmax, max_edges)?;
    let mut terms = Vec::with_capacity(classes.len());
    let mut total = NeumaierSum::new();
    for h in classes {
        let v = h.vertex_count();
        if v > n {
            continue;
        }
        let copies = falling_factorial(n as u64, v as u64) / h.automorphism_count()? as f64;
        let sw = signed_weight_with(&h, params, cfg)?.value;
        let contribution = copies * sw * sw / (p * (1.0 - p)).powi(h.edge_count() as i32);
        total.add(contribution);
        terms.push(AdvantageTerm {
            pattern: h
                .edges()
                .iter()
                .map(|(a, b)| format!("{a}-{b}"))
                .collect::<Vec<_>>()
                .join(" "),
            vertices: v,
            edges: h.edge_count(),
            copies,
            signed_weight: sw,
            contribution,
        });
    }
    Ok(AdvantageReport {
        n,
        d: params.d,
        p,
        max_edges,
        max_vertices: vmax,
        value: total.value(),
        terms,
    })
}
