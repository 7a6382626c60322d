//! Small numerical helpers: compensated and double-double accumulation,
//! binomials, and binomial confidence intervals.

use statrs::distribution::{ContinuousCDF, Normal};

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Unevaluated sum `hi + lo` carrying roughly 106 bits of mantissa.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    pub fn add(self, o: DoubleDouble) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Either accumulator, picked by the expected amount of cancellation.
#[derive(Clone, Copy, Debug)]
pub enum Accumulator {
    Compensated(NeumaierSum),
    Extended(DoubleDouble),
}

impl Accumulator {
    pub fn new(extended: bool) -> Self {
        if extended {
            Accumulator::Extended(DoubleDouble::ZERO)
        } else {
            Accumulator::Compensated(NeumaierSum::new())
        }
    }

    pub fn add(&mut self, x: f64) {
        match self {
            Accumulator::Compensated(s) => s.add(x),
            Accumulator::Extended(d) => *d = d.add_f64(x),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Accumulator::Compensated(s) => s.value(),
            Accumulator::Extended(d) => d.to_f64(),
        }
    }
}

/// Exact binomial coefficient; panics on overflow of `u128`.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    checked_binomial(n, k).expect("binomial coefficient overflows u128")
}

fn checked_binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Correctly rounded while the exact value fits in `u128`.
pub fn binomial(n: u64, k: u64) -> f64 {
    match checked_binomial(n, k) {
        Some(c) => c as f64,
        None => ln_binomial(n, k).exp(),
    }
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

pub fn factorial(n: u64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Falling factorial `n (n-1) ... (n-k+1)` as a float.
pub fn falling_factorial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64).product()
}

/// Standard normal quantile.
pub fn normal_quantile(prob: f64) -> f64 {
    Normal::standard().inverse_cdf(prob)
}

pub fn normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Wilson score interval for `successes` out of `trials` at confidence `level`.
pub fn wilson_interval(successes: u64, trials: u64, level: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = normal_quantile(0.5 + level / 2.0);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let radius = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - radius).max(0.0), (centre + radius).min(1.0))
}

/// Mean and Bessel-corrected variance of a slice (variance is 0 for a single value).
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().copied().collect::<NeumaierSum>().value() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = values
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .collect::<NeumaierSum>()
        .value();
    (mean, ss / (n - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        let s: NeumaierSum = xs.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
        let mut d = DoubleDouble::ZERO;
        for x in xs {
            d = d.add_f64(x);
        }
        assert_eq!(d.to_f64(), 2.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u128(100, 3), 161_700);
        assert_eq!(binomial(4, 2), 6.0);
        assert!((ln_binomial(1000, 500) - binomial(1000, 500).ln()).abs() < 1e-9);
        assert_eq!(falling_factorial(5, 3), 60.0);
        assert_eq!(binomial(1771, 2), 1_567_335.0);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(45, 100, 0.95);
        assert!(lo < 0.45 && 0.45 < hi);
        let (lo, hi) = wilson_interval(0, 50, 0.95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
    }

    #[test]
    fn bessel_variance() {
        let (m, v) = mean_variance(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
    }
}
