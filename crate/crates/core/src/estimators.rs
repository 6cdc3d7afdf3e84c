//! Closed-form estimates of `M(m, s; n, t)`.
//!
//! All asymptotic error terms are dropped; every estimate is returned in log
//! space. Ratios are kept as exact rationals until the final logarithm.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::numeric::{
    binomial, ln_biguint, ln_factorial, ln_rational, log_binomial, rational_to_f64, ratio,
    CountExact, EstimateInterval, LogEstimate,
};
use crate::table::{Density, TableSpec};

/// Binomials whose top argument is at most this are evaluated exactly
/// before taking the logarithm.
pub const EXACT_BINOMIAL_LIMIT: u64 = 10_000;

/// Saddle-point quantities: the density `λ`, `A = λ(1+λ)/2`, and the contour
/// radius `r = sqrt(λ/(1+λ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleParams {
    lambda: Density,
    a: BigRational,
    r_squared: BigRational,
}

impl SaddleParams {
    pub fn new(spec: &TableSpec) -> Result<Self> {
        let lambda = spec.positive_density()?;
        let l = lambda.as_rational().clone();
        let one = BigRational::one();
        let a = &l * (&one + &l) / BigRational::from_integer(BigInt::from(2));
        let r_squared = &l / (&one + &l);
        Ok(SaddleParams {
            lambda,
            a,
            r_squared,
        })
    }

    pub fn lambda(&self) -> &Density {
        &self.lambda
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn a_f64(&self) -> f64 {
        rational_to_f64(&self.a)
    }

    /// `r²` as an exact rational; `r²(1 + λ) = λ`.
    pub fn radius_squared(&self) -> &BigRational {
        &self.r_squared
    }

    pub fn radius(&self) -> f64 {
        rational_to_f64(&self.r_squared).sqrt()
    }
}

fn ln_binomial_auto(a: u64, b: u64) -> f64 {
    if a <= EXACT_BINOMIAL_LIMIT {
        ln_biguint(&binomial(a, b))
    } else {
        log_binomial(a, b).expect("binomial arguments in range")
    }
}

/// `ln` of the entropy factor `λ^{-λ}(1+λ)^{1+λ}` for `λ = p/q`, written as
/// `[(p+q)ln(p+q) − p ln p − q ln q]/q` to keep the logs on integers.
pub(crate) fn ln_entropy_factor(lambda: &BigRational) -> f64 {
    let p = lambda.numer();
    let q = lambda.denom();
    let pq = p + q;
    let x_ln_x = |x: &BigInt| x.to_f64().unwrap() * ln_biguint(x.magnitude());
    (x_ln_x(&pq) - x_ln_x(p) - x_ln_x(q)) / q.to_f64().unwrap()
}

/// Good's estimate
/// `G = C(n+s−1, s)^m · C(m+t−1, t)^n / C(mn+λmn−1, λmn)`.
pub fn good_estimate(spec: &TableSpec) -> Result<LogEstimate> {
    spec.positive_density()?;
    let (m, s, n, t) = (spec.m(), spec.s(), spec.n(), spec.t());
    let total = u64::try_from(spec.total())
        .map_err(|_| Error::invalid("total mass exceeds 64 bits"))?;
    let cells = u64::try_from(spec.cells()).map_err(|_| Error::invalid("cell count exceeds 64 bits"))?;
    let rows = m as f64 * ln_binomial_auto(n + s - 1, s);
    let cols = n as f64 * ln_binomial_auto(m + t - 1, t);
    let all = ln_binomial_auto(cells + total - 1, total);
    Ok(LogEstimate::from_ln(rows + cols - all))
}

/// `G·e^{1/2}`.
pub fn thm1_estimate(spec: &TableSpec) -> Result<LogEstimate> {
    Ok(good_estimate(spec)?.offset(0.5))
}

/// The fully explicit form
/// `(λ^{-λ}(1+λ)^{1+λ})^{mn} / ((4πA)^{(m+n−1)/2} m^{(n−1)/2} n^{(m−1)/2})
///  · exp(1/2 − (1+2A)/(24A)·(m/n + n/m))`.
pub fn thm1_closed_estimate(spec: &TableSpec) -> Result<LogEstimate> {
    let params = SaddleParams::new(spec)?;
    let (m, n) = (spec.m(), spec.n());
    let (mf, nf) = (m as f64, n as f64);
    let a = params.a();

    let entropy = mf * nf * ln_entropy_factor(params.lambda().as_rational());
    let ln_4pi_a = (4.0 * PI).ln() + ln_rational(a);
    let denominator =
        0.5 * (mf + nf - 1.0) * ln_4pi_a + 0.5 * (nf - 1.0) * mf.ln() + 0.5 * (mf - 1.0) * nf.ln();

    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let aspect = ratio(m, n) + ratio(n, m);
    let correction = (&one + &two * a) / (BigRational::from_integer(BigInt::from(24)) * a) * aspect;
    let exponent = 0.5 - rational_to_f64(&correction);

    Ok(LogEstimate::from_ln(entropy - denominator + exponent))
}

/// `(λ + 1/2)^{(m−1)(n−1)} (mn)! / (m!^n n!^m) · e^{1/2}`.
pub fn cor1_estimate(spec: &TableSpec) -> Result<LogEstimate> {
    let lambda = spec.positive_density()?;
    let (m, n) = (spec.m(), spec.n());
    let cells = u64::try_from(spec.cells()).map_err(|_| Error::invalid("cell count exceeds 64 bits"))?;
    let half = ratio(1, 2);
    let base = lambda.as_rational() + half;
    let free = ((m - 1) as f64) * ((n - 1) as f64);
    let ln = free * ln_rational(&base) + ln_factorial(cells)
        - n as f64 * ln_factorial(m)
        - m as f64 * ln_factorial(n)
        + 0.5;
    Ok(LogEstimate::from_ln(ln))
}

/// `ln V(Δ) − Δ/(m+n)`: the Δ-independent part of the conjectured form
/// `V(Δ) = G (1+1/m)^{(m−1)/2} (1+1/n)^{(n−1)/2} exp(−1/2 + Δ/(m+n))`.
fn conj1_base(spec: &TableSpec) -> Result<f64> {
    let g = good_estimate(spec)?;
    let (mf, nf) = (spec.m() as f64, spec.n() as f64);
    Ok(g.ln() + 0.5 * (mf - 1.0) * (1.0 / mf).ln_1p() + 0.5 * (nf - 1.0) * (1.0 / nf).ln_1p() - 0.5)
}

/// `V(Δ)` for a chosen `Δ`.
pub fn conj1_value(spec: &TableSpec, delta: f64) -> Result<LogEstimate> {
    let base = conj1_base(spec)?;
    let size = (spec.m() + spec.n()) as f64;
    Ok(LogEstimate::from_ln(base + delta / size))
}

/// The range `[V(0), V(2)]`.
pub fn conj1_interval(spec: &TableSpec) -> Result<EstimateInterval> {
    EstimateInterval::new(conj1_value(spec, 0.0)?, conj1_value(spec, 2.0)?)
}

/// Solves `M = V(Δ)` for `Δ`, given `ln M`.
pub fn conj1_delta_from_ln(spec: &TableSpec, ln_count: f64) -> Result<f64> {
    let base = conj1_base(spec)?;
    Ok((spec.m() + spec.n()) as f64 * (ln_count - base))
}

pub fn conj1_delta(spec: &TableSpec, exact: &CountExact) -> Result<f64> {
    if exact.is_zero() {
        return Err(Error::invalid("exact count must be positive"));
    }
    conj1_delta_from_ln(spec, exact.ln())
}

/// The factorisation `M = N·P₁·P₂·E` into the number of tables with the
/// right total, the two margin probabilities under the uniform distribution
/// on those tables, and the dependence correction.
#[derive(Debug, Clone, PartialEq)]
pub struct Remark1Decomposition {
    pub total_tables: CountExact,
    pub row_probability: BigRational,
    pub column_probability: BigRational,
    pub correction: BigRational,
}

impl Remark1Decomposition {
    /// `N·P₁·P₂·E` as an exact rational.
    pub fn product(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.total_tables.value().clone()))
            * &self.row_probability
            * &self.column_probability
            * &self.correction
    }
}

pub fn remark1_decompose(spec: &TableSpec, exact: &CountExact) -> Result<Remark1Decomposition> {
    spec.positive_density()?;
    if exact.is_zero() {
        return Err(Error::invalid("exact count must be positive"));
    }
    let (m, s, n, t) = (spec.m(), spec.s(), spec.n(), spec.t());
    let total = u64::try_from(spec.total()).map_err(|_| Error::invalid("total mass exceeds 64 bits"))?;
    let cells = u64::try_from(spec.cells()).map_err(|_| Error::invalid("cell count exceeds 64 bits"))?;
    let big = |x: BigUint| BigInt::from(x);

    let all = binomial(cells + total - 1, total);
    let rows = num_traits::pow(binomial(n + s - 1, s), m as usize);
    let cols = num_traits::pow(binomial(m + t - 1, t), n as usize);

    let row_probability = BigRational::new(big(rows.clone()), big(all.clone()));
    let column_probability = BigRational::new(big(cols.clone()), big(all.clone()));
    let correction = BigRational::new(big(exact.value() * &all), big(rows * cols));
    let out = Remark1Decomposition {
        total_tables: CountExact::new(all),
        row_probability,
        column_probability,
        correction,
    };
    debug_assert_eq!(
        out.product(),
        BigRational::from_integer(big(exact.value().clone()))
    );
    Ok(out)
}

/// The left side of the growth condition
/// `(1+2λ)²/(4λ(1+λ)) · (1 + 5m/(6n) + 5n/(6m)) ≤ a·ln n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub lhs: BigRational,
    /// Smallest `a` satisfying the inequality; `None` when `n = 1`.
    pub min_a: Option<f64>,
}

impl HypothesisReport {
    pub fn lhs_f64(&self) -> f64 {
        rational_to_f64(&self.lhs)
    }

    /// Whether the inequality holds for the given `a`.
    pub fn holds_for(&self, a: f64) -> bool {
        self.min_a.is_some_and(|min| min <= a)
    }
}

pub fn hypothesis_lhs(spec: &TableSpec) -> Result<HypothesisReport> {
    let lambda = spec.positive_density()?.into_rational();
    let (m, n) = (spec.m(), spec.n());
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let spread = &one + &two * &lambda;
    let density_term = &spread * &spread / (four * &lambda * (&one + &lambda));
    let aspect = &one + ratio(5 * m, 6 * n) + ratio(5 * n, 6 * m);
    let lhs = density_term * aspect;
    let min_a = (n > 1).then(|| rational_to_f64(&lhs) / (n as f64).ln());
    Ok(HypothesisReport { lhs, min_a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::exact::{count_bruteforce, count_exact};

    fn spec(m: u64, s: u64, n: u64, t: u64) -> TableSpec {
        TableSpec::new(m, s, n, t).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        ((a - b) / b).abs() <= rel
    }

    #[test]
    fn saddle_params() {
        let p = SaddleParams::new(&spec(3, 100, 3, 100)).unwrap();
        assert_eq!(p.a(), &ratio(100 * 103, 2 * 9));
        let one = BigRational::one();
        assert_eq!(
            p.radius_squared() * (&one + p.lambda().as_rational()),
            p.lambda().as_rational().clone()
        );
        assert!((p.radius() - (100.0f64 / 103.0).sqrt()).abs() < 1e-15);
        assert_eq!(SaddleParams::new(&spec(2, 0, 3, 0)).unwrap_err(), Error::ZeroDensity);
    }

    #[test]
    fn good_estimate_single_row_is_one() {
        for (s, n) in [(6u64, 3u64), (10, 5), (7, 7)] {
            let g = good_estimate(&spec(1, s, n, s / n)).unwrap();
            assert!(g.ln().abs() < 1e-12, "{}", g.ln());
        }
    }

    #[test]
    fn zero_density_is_rejected_everywhere() {
        let z = spec(3, 0, 4, 0);
        assert!(good_estimate(&z).is_err());
        assert!(thm1_estimate(&z).is_err());
        assert!(thm1_closed_estimate(&z).is_err());
        assert!(cor1_estimate(&z).is_err());
        assert!(conj1_interval(&z).is_err());
        assert!(hypothesis_lhs(&z).is_err());
        assert!(remark1_decompose(&z, &CountExact::from(1)).is_err());
    }

    #[test]
    fn thm1_is_good_times_root_e() {
        for sp in [spec(3, 100, 3, 100), spec(18, 13, 18, 13), spec(2, 3, 3, 2)] {
            let g = good_estimate(&sp).unwrap().ln();
            let t = thm1_estimate(&sp).unwrap().ln();
            assert_eq!(t - g, 0.5);
        }
    }

    #[test]
    fn closed_form_two_by_two() {
        // 256·e^{1/4} / (2·(4π)^{3/2})
        let expected = 256.0 * 0.25f64.exp() / (2.0 * (4.0 * PI).powf(1.5));
        let got = thm1_closed_estimate(&spec(2, 2, 2, 2)).unwrap().value();
        assert!(close(got, expected, 1e-13), "{got} vs {expected}");
        assert!((got - 3.69).abs() < 0.005);
    }

    #[test]
    fn closed_form_tracks_binomial_form_when_large() {
        let sp = spec(200, 200, 200, 200);
        let a = thm1_closed_estimate(&sp).unwrap().ln();
        let b = thm1_estimate(&sp).unwrap().ln();
        assert!(close(a, b, 0.01), "{a} vs {b}");
    }

    #[test]
    fn closed_form_is_transpose_symmetric() {
        for sp in [spec(3, 98, 49, 6), spec(3, 99, 9, 33), spec(4, 15, 3, 20)] {
            let a = thm1_closed_estimate(&sp).unwrap().ln();
            let b = thm1_closed_estimate(&sp.transpose()).unwrap().ln();
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn cor1_examples() {
        // 1.5 · 24/16 · e^{1/2}
        let expected = 1.5 * 24.0 / 16.0 * 0.5f64.exp();
        let got = cor1_estimate(&spec(2, 2, 2, 2)).unwrap().value();
        assert!(close(got, expected, 1e-13));
        for s in [1u64, 5, 40] {
            let v = cor1_estimate(&spec(1, s, 1, s)).unwrap().ln();
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn cor1_is_accurate_for_dense_three_by_three() {
        let sp = spec(3, 300, 3, 300);
        let exact = count_exact(&sp).unwrap().ln();
        let est = cor1_estimate(&sp).unwrap().ln();
        // at n = 3 the e^{1/2} correction overshoots; the gap is ln 1.266
        assert!(close(est, exact, 0.012), "{est} vs {exact}");
        assert!((est - exact - 0.2362).abs() < 1e-3, "{est} vs {exact}");
    }

    #[test]
    fn conj1_interval_ordering_and_round_trip() {
        for sp in [spec(2, 3, 3, 2), spec(3, 100, 3, 100), spec(30, 3, 30, 3), spec(1, 4, 2, 2)] {
            let iv = conj1_interval(&sp).unwrap();
            assert!(iv.low().ln() < iv.high().ln());
            for planted in [0.1, 1.0, 1.9] {
                let v = conj1_value(&sp, planted).unwrap();
                let back = conj1_delta_from_ln(&sp, v.ln()).unwrap();
                assert!((back - planted).abs() < 1e-10, "{back} vs {planted}");
            }
        }
    }

    #[test]
    fn conj1_delta_small_cases_in_range() {
        let sp = spec(3, 100, 3, 100);
        let d = conj1_delta(&sp, &CountExact::from(13_268_976)).unwrap();
        assert!(d > 0.0 && d < 2.0, "{d}");
        let sp = spec(2, 3, 3, 2);
        let exact = count_bruteforce(&sp).unwrap();
        let d = conj1_delta(&sp, &exact).unwrap();
        assert!(d > 0.0 && d < 2.0, "{d}");
        assert!(conj1_delta(&sp, &CountExact::from(0)).is_err());
    }

    #[test]
    fn conj1_interval_contains_exact_for_ten_by_ten() {
        let iv = conj1_interval(&spec(10, 20, 10, 20)).unwrap();
        assert!(iv.contains_ln((1.09747e59f64).ln()));
    }

    #[test]
    fn remark1_examples() {
        let d = remark1_decompose(&spec(2, 3, 3, 2), &CountExact::from(7)).unwrap();
        assert_eq!(d.correction, ratio(539, 450));
        assert_eq!(d.total_tables, CountExact::from(462));
        assert_eq!(d.product(), ratio(7, 1));

        let d = remark1_decompose(&spec(1, 6, 3, 2), &CountExact::from(1)).unwrap();
        assert_eq!(d.correction, ratio(1, 1));

        let exact = count_bruteforce(&spec(2, 2, 2, 2)).unwrap();
        let d = remark1_decompose(&spec(2, 2, 2, 2), &exact).unwrap();
        assert_eq!(d.total_tables, CountExact::from(35));
        // P₁ = C(3,2)²/35 = 9/35, P₂ likewise, E = 3·35/81
        assert_eq!(d.row_probability, ratio(9, 35));
        assert_eq!(d.correction, ratio(3 * 35, 81));
    }

    #[test]
    fn remark1_probabilities_are_in_unit_interval() {
        for sp in [spec(2, 3, 3, 2), spec(3, 4, 4, 3), spec(3, 100, 3, 100)] {
            let exact = count_exact(&sp).unwrap();
            let d = remark1_decompose(&sp, &exact).unwrap();
            let zero = BigRational::zero();
            let one = BigRational::one();
            assert!(d.row_probability > zero && d.row_probability <= one);
            assert!(d.column_probability > zero && d.column_probability <= one);
            assert_eq!(d.product(), BigRational::from_integer(BigInt::from(exact.into_value())));
        }
    }

    #[test]
    fn hypothesis_examples() {
        for n in [2u64, 5, 17] {
            let r = hypothesis_lhs(&spec(n, n, n, n)).unwrap();
            assert_eq!(r.lhs, ratio(3, 1));
        }
        let r = hypothesis_lhs(&spec(3, 100, 3, 100)).unwrap();
        // (203/3)² / (4·(100/3)·(103/3)) · (8/3)
        let expected = ratio(203 * 203, 4 * 100 * 103) * ratio(8, 3);
        assert_eq!(r.lhs, expected);
        assert!((r.min_a.unwrap() - r.lhs_f64() / 3f64.ln()).abs() < 1e-15);
        let t = hypothesis_lhs(&spec(3, 98, 49, 6)).unwrap();
        let u = hypothesis_lhs(&spec(49, 6, 3, 98)).unwrap();
        assert_eq!(t.lhs, u.lhs);
        assert!(hypothesis_lhs(&spec(2, 1, 1, 2)).unwrap().min_a.is_none());
    }
}
