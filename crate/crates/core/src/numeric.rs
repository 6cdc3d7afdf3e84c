//! Big-integer combinatorics, log-space arithmetic and scientific rendering.

use std::cmp::Ordering;
use std::f64::consts::{LN_10, LN_2};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact count of matrices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountExact(BigUint);

impl CountExact {
    pub fn new(value: BigUint) -> Self {
        CountExact(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn ln(&self) -> f64 {
        ln_biguint(&self.0)
    }

    pub fn as_log(&self) -> LogEstimate {
        LogEstimate::from_biguint(&self.0)
    }
}

impl From<u64> for CountExact {
    fn from(v: u64) -> Self {
        CountExact(BigUint::from(v))
    }
}

impl fmt::Display for CountExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact binomial coefficient `C(a, b)`; zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let k = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= a - k + i;
        acc /= i;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Natural log of a positive big integer. Returns `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of nonpositive rational {x}");
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = x.to_f64().filter(|v| v.is_finite() && *v != 0.0) {
        return v;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&x.abs()).exp()
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// `ln C(a, b)` in double precision.
///
/// Short products are multiplied out directly; otherwise the value is a
/// difference of log-gamma terms.
pub fn log_binomial(a: u64, b: u64) -> Result<f64> {
    if b > a {
        return Err(Error::invalid(format!("log_binomial({a}, {b}): b exceeds a")));
    }
    let k = b.min(a - b);
    if k == 0 {
        return Ok(0.0);
    }
    if k <= 24 {
        let mut ln_acc = 0.0;
        let mut prod = 1.0f64;
        for i in 1..=k {
            prod *= (a - k + i) as f64 / i as f64;
            if prod > 1e250 {
                ln_acc += prod.ln();
                prod = 1.0;
            }
        }
        return Ok(ln_acc + prod.ln());
    }
    Ok(ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b))
}

/// Lookup table of `ln k!` for `k ≤ limit`, used on hot sampling paths.
#[derive(Debug, Clone)]
pub struct LnFactorialTable {
    values: Vec<f64>,
}

impl LnFactorialTable {
    pub fn new(limit: usize) -> Self {
        let values = (0..=limit as u64).map(ln_factorial).collect();
        LnFactorialTable { values }
    }

    #[inline]
    pub fn ln_binomial(&self, a: usize, b: usize) -> f64 {
        debug_assert!(b <= a);
        self.values[a] - self.values[b] - self.values[a - b]
    }
}

/// Numerically stable `ln Σ exp(x_i)`.
/// Sum in a fixed binary-tree order, so the result does not depend on how
/// the terms were produced.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + std::ops::Add<Output = T> + Default,
{
    if xs.len() <= 32 {
        return xs.iter().fold(T::default(), |acc, &x| acc + x);
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = xs.iter().map(|x| (x - max).exp()).sum();
    max + sum.ln()
}

/// A number in `mantissa × 10^exponent` form with a fixed count of
/// significant digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scientific {
    pub mantissa: String,
    pub exponent: i64,
}

impl Scientific {
    /// Parses back to a double; only used for comparisons in tests and
    /// diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.mantissa.parse::<f64>().unwrap() * 10f64.powi(self.exponent as i32)
    }
}

impl fmt::Display for Scientific {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{}", self.mantissa, self.exponent)
    }
}

fn split_log10(ln: f64) -> (f64, i64) {
    let log10 = ln / LN_10;
    let exponent = log10.floor();
    (log10 - exponent, exponent as i64)
}

fn format_mantissa(value: f64, decimals: usize) -> String {
    format!("{value:.decimals$}")
}

/// A positive quantity held as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogEstimate {
    ln: f64,
}

impl LogEstimate {
    pub fn from_ln(ln: f64) -> Self {
        LogEstimate { ln }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        LogEstimate { ln: ln_biguint(x) }
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn log10(&self) -> f64 {
        self.ln / LN_10
    }

    /// The value itself; overflows to infinity beyond `f64` range.
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    /// `(mantissa ∈ [1, 10), decimal exponent)` at full double precision.
    pub fn mantissa_exponent(&self) -> (f64, i64) {
        let (frac, exponent) = split_log10(self.ln);
        (10f64.powf(frac), exponent)
    }

    /// Renders with `digits` significant digits (at least one).
    pub fn scientific(&self, digits: usize) -> Scientific {
        let digits = digits.max(1);
        let (mut mant, mut exponent) = self.mantissa_exponent();
        let mut text = format_mantissa(mant, digits - 1);
        if text.starts_with("10") {
            exponent += 1;
            mant /= 10.0;
            text = format_mantissa(mant, digits - 1);
        }
        Scientific {
            mantissa: text,
            exponent,
        }
    }

    pub fn offset(&self, delta_ln: f64) -> Self {
        LogEstimate {
            ln: self.ln + delta_ln,
        }
    }
}

impl fmt::Display for LogEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scientific(4))
    }
}

/// A closed interval `[low, high]` of positive quantities, rendered as
/// `(midpoint ± half-width) × 10^e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateInterval {
    low: LogEstimate,
    high: LogEstimate,
}

/// Midpoint and half-width mantissas sharing the midpoint's exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRendering {
    pub midpoint: String,
    pub half_width: String,
    pub exponent: i64,
}

impl fmt::Display for IntervalRendering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ± {})e{}", self.midpoint, self.half_width, self.exponent)
    }
}

impl EstimateInterval {
    pub fn new(low: LogEstimate, high: LogEstimate) -> Result<Self> {
        if low.ln.partial_cmp(&high.ln) == Some(Ordering::Greater) || low.ln.is_nan() {
            return Err(Error::invalid(format!(
                "interval bounds out of order: {} > {}",
                low.ln, high.ln
            )));
        }
        Ok(EstimateInterval { low, high })
    }

    pub fn low(&self) -> LogEstimate {
        self.low
    }

    pub fn high(&self) -> LogEstimate {
        self.high
    }

    pub fn midpoint(&self) -> LogEstimate {
        let gap = self.high.ln - self.low.ln;
        // ln((1 + e^gap) / 2) without overflow
        let shift = if gap > 0.0 {
            gap + (0.5 * (1.0 + (-gap).exp())).ln()
        } else {
            0.0
        };
        self.low.offset(shift)
    }

    /// `ln((high − low)/2)`; `-inf` for a degenerate interval.
    pub fn ln_half_width(&self) -> f64 {
        let gap = self.high.ln - self.low.ln;
        if gap <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.low.ln + (0.5 * gap.exp_m1()).ln()
    }

    pub fn contains_ln(&self, ln: f64) -> bool {
        self.low.ln <= ln && ln <= self.high.ln
    }

    pub fn render(&self, digits: usize) -> IntervalRendering {
        let digits = digits.max(1);
        let mid = self.midpoint();
        let sci = mid.scientific(digits);
        let decimals = digits - 1;
        let scale = sci.exponent as f64 * LN_10;
        let half = (self.ln_half_width() - scale).exp();
        IntervalRendering {
            midpoint: sci.mantissa,
            half_width: format_mantissa(half, decimals),
            exponent: sci.exponent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_binomials() {
        assert_eq!(binomial(11, 6), BigUint::from(462u32));
        assert_eq!(binomial(7, 4), BigUint::from(35u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn log_binomial_examples() {
        let v = log_binomial(11, 6).unwrap();
        assert!((v - 462f64.ln()).abs() < 1e-12 * 462f64.ln());
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        let exact = ln_biguint(&binomial(308, 8));
        let v = log_binomial(308, 300).unwrap();
        assert!(((v - exact) / exact).abs() < 1e-12);
        assert!(log_binomial(3, 4).is_err());
    }

    #[test]
    fn ln_of_huge_integers() {
        let big = BigUint::one() << 5000u32;
        let expected = 5000.0 * LN_2;
        assert!((ln_biguint(&big) - expected).abs() < 1e-9);
        let x = factorial(500);
        assert!((ln_biguint(&x) - ln_factorial(500)).abs() < 1e-9);
    }

    #[test]
    fn scientific_rendering() {
        let e = LogEstimate::from_ln((13268976f64).ln());
        assert_eq!(e.scientific(4).to_string(), "1.327e7");
        assert_eq!(e.scientific(8).to_string(), "1.3268976e7");
        let near_ten = LogEstimate::from_ln((9.99996f64).ln());
        assert_eq!(near_ten.scientific(4).to_string(), "1.000e1");
        assert_eq!(LogEstimate::from_ln(0.0).scientific(4).to_string(), "1.000e0");
    }

    #[test]
    fn interval_rendering_is_shared_exponent() {
        let iv = EstimateInterval::new(
            LogEstimate::from_ln(1.0e7f64.ln()),
            LogEstimate::from_ln(1.5e7f64.ln()),
        )
        .unwrap();
        assert_eq!(iv.render(4).to_string(), "(1.250 ± 0.250)e7");
        assert!(EstimateInterval::new(iv.high(), iv.low()).is_err());
    }

    proptest! {
        #[test]
        fn log_binomial_matches_exact(a in 0u64..=1000, frac in 0.0f64..=1.0) {
            let b = ((a as f64) * frac).round() as u64;
            let exact = ln_biguint(&binomial(a, b));
            let approx = log_binomial(a, b).unwrap();
            if exact == 0.0 {
                prop_assert_eq!(approx, 0.0);
            } else {
                prop_assert!(((approx - exact) / exact).abs() <= 1e-12,
                    "a={} b={} exact={} approx={}", a, b, exact, approx);
            }
        }

        #[test]
        fn rendering_round_trips(ln in -700.0f64..700.0) {
            let est = LogEstimate::from_ln(ln);
            let (mant, exp) = est.mantissa_exponent();
            prop_assert!((1.0..10.0).contains(&mant));
            let back = (mant.log10() + exp as f64) * LN_10;
            prop_assert!((back - ln).abs() <= 1e-12 * ln.abs().max(1.0));
        }

        #[test]
        fn rendering_is_monotone(a in -300.0f64..300.0, b in -300.0f64..300.0, digits in 1usize..8) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let r_lo = LogEstimate::from_ln(lo).scientific(digits);
            let r_hi = LogEstimate::from_ln(hi).scientific(digits);
            let key = |s: &Scientific| (s.exponent, s.mantissa.parse::<f64>().unwrap());
            prop_assert!(key(&r_lo) <= key(&r_hi), "{} vs {}", r_lo, r_hi);
        }
    }
}
