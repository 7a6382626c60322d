//! Torus points, circular and `L_q` distances, and the threshold calculus
//! linking a target edge density `p` to the connection radius `tau`.
//!
//! The torus is a product of circles of circumference 2, so every
//! coordinatewise circular distance lies in `[0, 1]` and the distance between
//! two independent uniform points is itself uniform on `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{binomial, factorial, normal_cdf};

/// Circumference of each circle factor.
pub const CIRCUMFERENCE: f64 = 2.0;

#[inline]
pub fn reduce_mod2(x: f64) -> f64 {
    let r = x.rem_euclid(CIRCUMFERENCE);
    // rem_euclid can round up to exactly 2.0 for tiny negative inputs
    if r >= CIRCUMFERENCE {
        0.0
    } else {
        r
    }
}

/// Length of the shorter arc between two points on the circle of circumference 2.
#[inline]
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let diff = (reduce_mod2(a) - reduce_mod2(b)).abs();
    diff.min(CIRCUMFERENCE - diff)
}

/// `|x|_C`, the circular distance to the origin.
#[inline]
pub fn circ_norm(x: f64) -> f64 {
    circ_dist(x, 0.0)
}

/// A point of the d-dimensional torus; coordinates are reduced mod 2 on construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return invalid("torus point must have dimension >= 1");
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return invalid("torus coordinates must be finite");
        }
        Ok(TorusPoint {
            coords: coords.into_iter().map(reduce_mod2).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// The exponent of the `L_q` norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum QSpec {
    Finite(f64),
    Infinity,
}

impl QSpec {
    pub fn finite(q: f64) -> Result<Self> {
        if !(q >= 1.0) || !q.is_finite() {
            return invalid(format!("q must be a finite real >= 1, got {q}"));
        }
        Ok(QSpec::Finite(q))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, QSpec::Infinity)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            QSpec::Finite(q) if !(q >= 1.0) || !q.is_finite() => {
                invalid(format!("q must be a finite real >= 1, got {q}"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for QSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSpec::Finite(q) => write!(f, "{q}"),
            QSpec::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for QSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "oo" => Ok(QSpec::Infinity),
            other => {
                let q: f64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid q value '{s}'")))?;
                QSpec::finite(q)
            }
        }
    }
}

/// `L_q` distance between two torus points built from coordinatewise circular distances.
pub fn lq_dist(x: &TorusPoint, y: &TorusPoint, q: QSpec) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    q.validate()?;
    Ok(lq_dist_slices(x.coords(), y.coords(), q))
}

pub(crate) fn lq_dist_slices(x: &[f64], y: &[f64], q: QSpec) -> f64 {
    let dists = x.iter().zip(y).map(|(&a, &b)| circ_dist(a, b));
    match q {
        QSpec::Infinity => dists.fold(0.0, f64::max),
        QSpec::Finite(1.0) => dists.sum(),
        QSpec::Finite(q) => dists.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q),
    }
}

/// Numerical settings for the finite-q threshold computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    /// Grid points over `[0, d]` used for the convolution.
    pub bins: usize,
    /// Bisection stops once `|CDF - p|` falls below this.
    pub tolerance: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            bins: 1 << 16,
            tolerance: 1e-9,
        }
    }
}

/// Full model parameterisation with the derived radius.
///
/// `tau` is the radius itself (not `tau^q`); `lambda = 1 - tau` is the
/// complement rate, meaningful for `q = inf` where it equals `1 - p^(1/d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub d: usize,
    pub q: QSpec,
    pub p: f64,
    pub tau: f64,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(n: usize, d: usize, q: QSpec, p: f64) -> Result<Self> {
        derive_tau_lambda(n, d, q, p)
    }

    pub fn linfty(n: usize, d: usize, p: f64) -> Result<Self> {
        derive_tau_lambda(n, d, QSpec::Infinity, p)
    }

    /// `tau^q` for finite q; `tau` itself for `q = inf`.
    pub fn tau_pow_q(&self) -> f64 {
        match self.q {
            QSpec::Infinity => self.tau,
            QSpec::Finite(q) => self.tau.powf(q),
        }
    }

    /// The marginal edge probability implied by `lambda` for `q = inf`, `(1 - lambda)^d`.
    pub fn implied_density(&self) -> f64 {
        (self.d as f64 * (-self.lambda).ln_1p()).exp()
    }

    pub fn with_n(&self, n: usize) -> Self {
        ModelParams { n, ..*self }
    }
}

/// Solve for the connection radius giving edge density `p`.
pub fn derive_tau_lambda(n: usize, d: usize, q: QSpec, p: f64) -> Result<ModelParams> {
    derive_tau_lambda_with(n, d, q, p, &ThresholdConfig::default())
}

pub fn derive_tau_lambda_with(
    n: usize,
    d: usize,
    q: QSpec,
    p: f64,
    cfg: &ThresholdConfig,
) -> Result<ModelParams> {
    if n < 1 {
        return invalid("n must be >= 1");
    }
    if d < 1 {
        return invalid("d must be >= 1");
    }
    if !(p > 0.0 && p <= 1.0) {
        return invalid(format!("p must lie in (0, 1], got {p}"));
    }
    q.validate()?;
    let tau = match q {
        QSpec::Infinity => {
            // tau = p^(1/d), lambda = -expm1(ln p / d)
            let lambda = -(p.ln() / d as f64).exp_m1();
            return Ok(ModelParams {
                n,
                d,
                q,
                p,
                tau: 1.0 - lambda,
                lambda,
            });
        }
        QSpec::Finite(qv) => {
            if p == 1.0 {
                (d as f64).powf(1.0 / qv)
            } else {
                let cdf = SumPowerCdf::new(d, qv, cfg.bins)?;
                cdf.quantile(p, cfg.tolerance)?.powf(1.0 / qv)
            }
        }
    };
    Ok(ModelParams {
        n,
        d,
        q,
        p,
        tau,
        lambda: 1.0 - tau,
    })
}

/// Minimum number of grid points accepted by [`SumPowerCdf`].
pub const MIN_CDF_BINS: usize = 1024;

/// CDF of `U_1^q + ... + U_d^q` for i.i.d. uniform `U_i` on `[0, 1]`.
///
/// Each summand's law is projected onto a uniform grid with piecewise-linear
/// (hat) weights computed from the exact CDF `x^(1/q)`, which conserves mass
/// and mean even though the density of `U^q` is unbounded at 0. The d-fold
/// convolution is done by FFT.
#[derive(Clone, Debug)]
pub struct SumPowerCdf {
    d: usize,
    q: f64,
    h: f64,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl SumPowerCdf {
    pub fn new(d: usize, q: f64, bins: usize) -> Result<Self> {
        if d < 1 {
            return invalid("d must be >= 1");
        }
        if !(q >= 1.0) || !q.is_finite() {
            return invalid(format!("q must be a finite real >= 1, got {q}"));
        }
        if bins < MIN_CDF_BINS || bins < 8 * d {
            return invalid(format!(
                "grid resolution {bins} below minimum (need >= {MIN_CDF_BINS} and >= 8 per unit of support)"
            ));
        }
        let h = d as f64 / bins as f64;
        let single = hat_masses(q, h);
        let masses = if d == 1 {
            single
        } else {
            fft_power(&single, d)
        };
        let mut cumulative = Vec::with_capacity(masses.len());
        let mut acc = 0.0;
        for &m in &masses {
            acc += m;
            cumulative.push(acc);
        }
        Ok(SumPowerCdf {
            d,
            q,
            h,
            masses,
            cumulative,
        })
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.d as f64 {
            return 1.0;
        }
        if self.d == 1 {
            return t.powf(1.0 / self.q);
        }
        // grid mass k is spread uniformly over [kh - h/2, kh + h/2]
        let s = t / self.h + 0.5;
        let j = s.floor() as usize;
        if j >= self.masses.len() {
            return 1.0;
        }
        let frac = s - j as f64;
        let below = if j == 0 { 0.0 } else { self.cumulative[j - 1] };
        (below + frac * self.masses[j]).clamp(0.0, 1.0)
    }

    /// Smallest `t` with `cdf(t) = prob` up to `tol`, by bisection.
    pub fn quantile(&self, prob: f64, tol: f64) -> Result<f64> {
        let (mut lo, mut hi) = (0.0, self.d as f64);
        if !(prob > self.cdf(lo) - tol && prob < self.cdf(hi) + tol) {
            return Err(Error::RootFinding(format!(
                "target probability {prob} outside achievable CDF range"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = self.cdf(mid);
            if (v - prob).abs() <= tol {
                return Ok(mid);
            }
            if v < prob {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        if (self.cdf(mid) - prob).abs() <= tol.max(1e-12) {
            Ok(mid)
        } else {
            Err(Error::RootFinding(format!(
                "bisection did not reach tolerance {tol} for p = {prob}"
            )))
        }
    }
}

/// Hat-function projection of the law of `U^q` onto the grid `k h`.
fn hat_masses(q: f64, h: f64) -> Vec<f64> {
    let inv_q = 1.0 / q;
    let cdf = |x: f64| x.clamp(0.0, 1.0).powf(inv_q);
    // partial first moment: int_0^x s dF(s)
    let moment = |x: f64| x.clamp(0.0, 1.0).powf(1.0 + inv_q) / (q + 1.0);
    let k_max = (1.0 / h).ceil() as usize;
    let mut out = vec![0.0; k_max + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let centre = k as f64 * h;
        let mut m = 0.0;
        if k > 0 {
            let a = ((k - 1) as f64 * h).min(1.0);
            let b = centre.min(1.0);
            if b > a {
                m += (moment(b) - moment(a) - a * (cdf(b) - cdf(a))) / h;
            }
        }
        let b = centre.min(1.0);
        let right = (k + 1) as f64 * h;
        let c = right.min(1.0);
        if c > b {
            m += (right * (cdf(c) - cdf(b)) - (moment(c) - moment(b))) / h;
        }
        *slot = m.max(0.0);
    }
    out
}

fn fft_power(single: &[f64], d: usize) -> Vec<f64> {
    let support = (single.len() - 1) * d + 1;
    let len = support.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut buf: Vec<Complex64> = (0..len)
        .map(|i| Complex64::new(single.get(i).copied().unwrap_or(0.0), 0.0))
        .collect();
    fwd.process(&mut buf);
    for z in buf.iter_mut() {
        *z = z.powu(d as u32);
    }
    inv.process(&mut buf);
    let scale = 1.0 / len as f64;
    let mut out: Vec<f64> = buf[..support]
        .iter()
        .map(|z| (z.re * scale).max(0.0))
        .collect();
    let total: f64 = out.iter().sum();
    for m in out.iter_mut() {
        *m /= total;
    }
    out
}

/// `P[U_1^q + ... + U_d^q <= t]` on the default grid.
pub fn sum_uq_cdf(d: usize, q: f64, t: f64) -> Result<f64> {
    Ok(SumPowerCdf::new(d, q, ThresholdConfig::default().bins.max(8 * d))?.cdf(t))
}

/// How a [`phi`] value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiMethod {
    /// Alternating-binomial Irwin–Hall closed form.
    ClosedForm,
    /// Positive-coefficient Irwin–Hall recurrence, used once the alternating
    /// sum would cancel below 1e-13 absolute accuracy.
    Recurrence,
    /// Central-limit approximation `erf(sqrt(3 / (2m)))`; flagged as approximate.
    NormalApprox,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiValue {
    pub value: f64,
    pub method: PhiMethod,
}

impl PhiValue {
    pub fn is_approximate(&self) -> bool {
        self.method == PhiMethod::NormalApprox
    }
}

/// Above this count the O(m^2) recurrence is replaced by the normal approximation.
pub const PHI_RECURRENCE_LIMIT: usize = 4000;

/// `P[U_1 + ... + U_m in [-1, 1]]` for i.i.d. uniform `U_i` on `[-1, 1]`; `phi(0) = 1`.
pub fn phi(m: usize) -> PhiValue {
    if m == 0 {
        return PhiValue {
            value: 1.0,
            method: PhiMethod::ClosedForm,
        };
    }
    // with V_i = (U_i + 1) / 2 uniform on [0, 1] the event is
    // sum V_i in [(m - 1) / 2, (m + 1) / 2]
    let lo = (m as f64 - 1.0) / 2.0;
    let hi = (m as f64 + 1.0) / 2.0;
    if alternating_error_bound(m) < 1e-13 {
        let value = irwin_hall_cdf_alternating(m, hi) - irwin_hall_cdf_alternating(m, lo);
        return PhiValue {
            value,
            method: PhiMethod::ClosedForm,
        };
    }
    if m <= PHI_RECURRENCE_LIMIT {
        let value = irwin_hall_cdf_recurrence(m, hi) - irwin_hall_cdf_recurrence(m, lo);
        return PhiValue {
            value,
            method: PhiMethod::Recurrence,
        };
    }
    // S has variance m/3; P[|S| <= 1] ~ P[|Z| <= sqrt(3/m)]
    let z = (3.0 / m as f64).sqrt();
    PhiValue {
        value: 2.0 * normal_cdf(z) - 1.0,
        method: PhiMethod::NormalApprox,
    }
}

fn alternating_error_bound(m: usize) -> f64 {
    let x = (m as f64 + 1.0) / 2.0;
    let largest = (0..=m)
        .map(|k| binomial(m as u64, k as u64) * (x - k as f64).max(0.0).powi(m as i32))
        .fold(0.0, f64::max);
    largest * (m as f64 + 1.0) * f64::EPSILON / factorial(m as u64)
}

fn irwin_hall_cdf_alternating(m: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= m as f64 {
        return 1.0;
    }
    let mut acc = 0.0;
    for k in 0..=(x.floor() as usize) {
        let term = binomial(m as u64, k as u64) * (x - k as f64).powi(m as i32);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / factorial(m as u64)
}

/// `F_j(y) = (y F_{j-1}(y) + (j - y) F_{j-1}(y - 1)) / j`, every coefficient nonnegative on `[0, j]`.
fn irwin_hall_cdf_recurrence(m: usize, x: f64) -> f64 {
    // row[i] holds F_j(x - i)
    let mut row: Vec<f64> = (0..=m)
        .map(|i| {
            let y = x - i as f64;
            y.clamp(0.0, 1.0)
        })
        .collect();
    for j in 2..=m {
        let jf = j as f64;
        let mut next = vec![0.0; m + 1];
        for i in 0..=m {
            let y = x - i as f64;
            next[i] = if y <= 0.0 {
                0.0
            } else if y >= jf {
                1.0
            } else {
                let below = if i < m { row[i + 1] } else { 0.0 };
                (y * row[i] + (jf - y) * below) / jf
            };
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circular_distance_examples() {
        assert_eq!(circ_dist(0.0, 1.0), 1.0);
        assert!((circ_dist(0.3, 1.9) - 0.4).abs() < 1e-12);
        assert_eq!(circ_dist(0.7, 0.7), 0.0);
        assert!((circ_dist(-0.1, 2.1) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn lq_distance_examples() {
        let o = TorusPoint::new(vec![0.0, 0.0]).unwrap();
        let a = TorusPoint::new(vec![1.0, 1.0]).unwrap();
        let b = TorusPoint::new(vec![1.0, 0.5]).unwrap();
        assert!((lq_dist(&o, &a, QSpec::Finite(2.0)).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(lq_dist(&o, &b, QSpec::Infinity).unwrap(), 1.0);
        assert_eq!(lq_dist(&o, &a, QSpec::Finite(1.0)).unwrap(), 2.0);
        let c = TorusPoint::new(vec![0.0]).unwrap();
        assert!(matches!(
            lq_dist(&o, &c, QSpec::Infinity),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn torus_point_reduces_mod_two() {
        let x = TorusPoint::new(vec![2.5, -0.5]).unwrap();
        assert!((x.coords()[0] - 0.5).abs() < 1e-12);
        assert!((x.coords()[1] - 1.5).abs() < 1e-12);
        assert!(TorusPoint::new(vec![]).is_err());
    }

    #[test]
    fn q_parsing() {
        assert_eq!("inf".parse::<QSpec>().unwrap(), QSpec::Infinity);
        assert_eq!("2".parse::<QSpec>().unwrap(), QSpec::Finite(2.0));
        assert!("0.5".parse::<QSpec>().is_err());
    }

    #[test]
    fn tau_closed_form_linfty() {
        let m = derive_tau_lambda(10, 1, QSpec::Infinity, 0.5).unwrap();
        assert_eq!(m.tau, 0.5);
        let m = derive_tau_lambda(10, 10, QSpec::Infinity, 0.5).unwrap();
        let direct = 1.0 - 2f64.powf(-0.1);
        assert!((m.lambda - direct).abs() < 1e-15);
        assert!((m.lambda - 0.0669670).abs() < 1e-7);
        // second-order series in ln2/d
        let x = 2f64.ln() / 10.0;
        assert!((m.lambda - (x - x * x / 2.0)).abs() < x.powi(3));
        assert!(((m.tau.powi(10) - 0.5) / 0.5).abs() < 1e-12);
    }

    #[test]
    fn tau_finite_q_quarter_disk() {
        let m = derive_tau_lambda(10, 2, QSpec::Finite(2.0), std::f64::consts::FRAC_PI_4).unwrap();
        assert!((m.tau - 1.0).abs() < 1e-4, "tau = {}", m.tau);
    }

    #[test]
    fn sum_uq_cdf_examples() {
        assert!((sum_uq_cdf(1, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-12);
        assert!((sum_uq_cdf(2, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-6);
        assert!(
            (sum_uq_cdf(2, 2.0, 1.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-5
        );
        assert_eq!(sum_uq_cdf(3, 2.0, 0.0).unwrap(), 0.0);
        assert_eq!(sum_uq_cdf(3, 2.0, 3.0).unwrap(), 1.0);
        assert!(SumPowerCdf::new(3, 2.0, 100).is_err());
    }

    #[test]
    fn sum_uq_cdf_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = 1_000_000;
        for _ in 0..20 {
            let d = rng.gen_range(1..=12usize);
            let q = rng.gen_range(1.0..6.0f64);
            let mean = d as f64 / (q + 1.0);
            let t = mean * rng.gen_range(0.6..1.4f64);
            let cdf = SumPowerCdf::new(d, q, 1 << 16).unwrap();
            let exact = cdf.cdf(t);
            let mut hits = 0u64;
            for _ in 0..samples {
                let s: f64 = (0..d).map(|_| rng.gen::<f64>().powf(q)).sum();
                if s <= t {
                    hits += 1;
                }
            }
            let est = hits as f64 / samples as f64;
            let se = (exact * (1.0 - exact) / samples as f64).sqrt().max(1e-7);
            assert!(
                (est - exact).abs() <= 4.0 * se,
                "d={d} q={q} t={t}: mc {est} vs {exact}"
            );
        }
    }

    #[test]
    fn tau_monotone_in_p() {
        let mut last = 0.0;
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let m = derive_tau_lambda(5, 4, QSpec::Finite(3.0), p).unwrap();
            assert!(m.tau >= last);
            last = m.tau;
        }
    }

    #[test]
    fn phi_footnote_values() {
        assert_eq!(phi(0).value, 1.0);
        assert!((phi(1).value - 1.0).abs() < 1e-15);
        assert!((phi(2).value - 0.75).abs() < 1e-15);
        assert!((phi(3).value - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn phi_methods_agree_where_both_apply() {
        for m in 1..=10 {
            let lo = (m as f64 - 1.0) / 2.0;
            let hi = (m as f64 + 1.0) / 2.0;
            let a = irwin_hall_cdf_alternating(m, hi) - irwin_hall_cdf_alternating(m, lo);
            let b = irwin_hall_cdf_recurrence(m, hi) - irwin_hall_cdf_recurrence(m, lo);
            assert!((a - b).abs() < 1e-13, "m={m}: {a} vs {b}");
        }
        assert_eq!(phi(40).method, PhiMethod::Recurrence);
        let big = phi(PHI_RECURRENCE_LIMIT + 1);
        assert!(big.is_approximate());
        let near = phi(PHI_RECURRENCE_LIMIT);
        assert!((big.value - near.value).abs() < 1e-4);
    }

    #[test]
    fn phi_nonincreasing_and_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut prev = 1.0;
        let samples = 400_000;
        for m in 1..=12 {
            let v = phi(m).value;
            assert!(v <= prev + 1e-15);
            prev = v;
            let mut hits = 0u64;
            for _ in 0..samples {
                let s: f64 = (0..m).map(|_| rng.gen_range(-1.0..1.0f64)).sum();
                if s.abs() <= 1.0 {
                    hits += 1;
                }
            }
            let est = hits as f64 / samples as f64;
            let se = (v * (1.0 - v) / samples as f64).sqrt().max(1e-9);
            assert!((est - v).abs() <= 4.0 * se, "m={m}: {est} vs {v}");
        }
    }
}
