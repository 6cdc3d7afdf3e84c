//! The Cauchy-integral representation of the count on the torus, and the
//! one-dimensional envelopes used to bound its integrand.
//!
//! With `x_j = r e^{iθ_j}`, `y_k = r e^{iφ_k}` and `r² = λ/(1+λ)`,
//!
//! ```text
//! M = (2π)^{−(m+n)} (λ^{−λ}(1+λ)^{1+λ})^{mn} I,
//! I = ∫ e^{−is Σθ − it Σφ} Π_{j,k} (1 − λ(e^{i(θ_j+φ_k)} − 1))^{−1} dθ dφ.
//! ```

use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::ln_entropy_factor;
use crate::numeric::{pairwise_sum, rational_to_f64};
use crate::table::TableSpec;

/// Default largest `m + n` accepted by the tensor-product quadrature.
pub const MAX_DIMENSION: u64 = 6;
pub const MIN_GRID: u64 = 8;
/// Default cap on integrand factor evaluations for one quadrature.
pub const DEFAULT_MAX_EVALS: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureLimits {
    pub max_evals: u64,
    pub max_dimension: u64,
}

impl Default for QuadratureLimits {
    fn default() -> Self {
        QuadratureLimits {
            max_evals: DEFAULT_MAX_EVALS,
            max_dimension: MAX_DIMENSION,
        }
    }
}

/// A point `(θ, φ)` of the torus, every angle in `(−π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    theta: Vec<f64>,
    phi: Vec<f64>,
}

fn wrap_angle(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

impl TorusPoint {
    pub fn new(theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        let bad = theta
            .iter()
            .chain(&phi)
            .find(|&&x| !(x > -PI && x <= PI));
        if let Some(x) = bad {
            return Err(Error::invalid(format!("angle {x} outside (−π, π]")));
        }
        Ok(TorusPoint { theta, phi })
    }

    /// Reduces arbitrary real angles onto `(−π, π]`.
    pub fn wrapped(theta: Vec<f64>, phi: Vec<f64>) -> Self {
        TorusPoint {
            theta: theta.into_iter().map(wrap_angle).collect(),
            phi: phi.into_iter().map(wrap_angle).collect(),
        }
    }

    pub fn origin(m: usize, n: usize) -> Self {
        TorusPoint {
            theta: vec![0.0; m],
            phi: vec![0.0; n],
        }
    }

    pub fn random<R: Rng>(m: usize, n: usize, rng: &mut R) -> Self {
        let mut angle = || wrap_angle(rng.gen_range(-PI..PI));
        let theta = (0..m).map(|_| angle()).collect();
        let phi = (0..n).map(|_| angle()).collect();
        TorusPoint { theta, phi }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }
}

fn check_point(spec: &TableSpec, p: &TorusPoint) -> Result<()> {
    if p.theta.len() as u64 != spec.m() || p.phi.len() as u64 != spec.n() {
        return Err(Error::invalid(format!(
            "point has {}+{} angles, spec needs {}+{}",
            p.theta.len(),
            p.phi.len(),
            spec.m(),
            spec.n()
        )));
    }
    Ok(())
}

/// `e^{−iα}` for `α = k·Σangles`, reduced modulo `2π` before the exponential.
fn phase(k: u64, angles: &[f64]) -> f64 {
    let sum: f64 = angles.iter().sum::<f64>().rem_euclid(TAU);
    (k as f64 * sum).rem_euclid(TAU)
}

/// The integrand `F(θ, φ)`.
pub fn integrand_f(spec: &TableSpec, p: &TorusPoint) -> Result<Complex64> {
    let lambda = rational_to_f64(spec.positive_density()?.as_rational());
    check_point(spec, p)?;
    let angle = phase(spec.s(), &p.theta) + phase(spec.t(), &p.phi);
    let mut value = Complex64::from_polar(1.0, -angle);
    for &th in &p.theta {
        for &ph in &p.phi {
            let z = wrap_angle(th + ph);
            let factor = Complex64::new(1.0, 0.0) - lambda * (Complex64::cis(z) - 1.0);
            if factor.norm_sqr() == 0.0 {
                return Err(Error::Verification(format!("integrand factor vanishes at z = {z}")));
            }
            value /= factor;
        }
    }
    Ok(value)
}

/// `f(z) = (1 + 4A(1 − cos z))^{−1/2}`, with `1 − cos z` taken as `2 sin²(z/2)`.
pub fn envelope_factor(a: f64, z: f64) -> f64 {
    let half = (0.5 * z).sin();
    (1.0 + 8.0 * a * half * half).sqrt().recip()
}

/// `Π_{j,k} f(θ_j + φ_k)`, which equals `|F(θ, φ)|`.
pub fn modulus_product(spec: &TableSpec, p: &TorusPoint) -> Result<f64> {
    let lambda = rational_to_f64(spec.positive_density()?.as_rational());
    check_point(spec, p)?;
    let a = lambda * (1.0 + lambda) / 2.0;
    let mut ln = 0.0;
    for &th in &p.theta {
        for &ph in &p.phi {
            ln += envelope_factor(a, th + ph).ln();
        }
    }
    Ok(ln.exp())
}

/// Largest relative gap between `|F|` and `Π f(θ_j + φ_k)` over random points.
pub fn lemma3_identity_check(spec: &TableSpec, points: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = (spec.m() as usize, spec.n() as usize);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = TorusPoint::random(m, n, &mut rng);
        let direct = integrand_f(spec, &p)?.norm();
        let product = modulus_product(spec, &p)?;
        worst = worst.max(((direct - product) / product).abs());
    }
    Ok(worst)
}

/// A periodic trapezoid approximation of `I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: Complex64,
    pub grid: u64,
    /// Integrand factor evaluations performed.
    pub evaluations: u64,
}

impl IntegralEstimate {
    /// `|Im I| / |Re I|`; the exact integral is real.
    pub fn imaginary_residue(&self) -> f64 {
        (self.value.im / self.value.re).abs()
    }
}

/// Work needed by [`integral_numeric`] for a given grid, in factor evaluations.
pub fn quadrature_cost(spec: &TableSpec, grid: u64) -> Option<u64> {
    let (m, n) = (spec.m().min(spec.n()), spec.m().max(spec.n()));
    grid.checked_pow((m - 1) as u32)?
        .checked_mul(grid)?
        .checked_mul(m + n)
}

pub fn integral_numeric(spec: &TableSpec, grid: u64) -> Result<IntegralEstimate> {
    integral_numeric_with(spec, grid, &QuadratureLimits::default())
}

/// Tensor-product trapezoid rule with `grid` points per angle.
///
/// On the uniform grid `θ_j = 2πa_j/G`, `φ_k = 2πb_k/G` every factor depends
/// only on `(a_j + b_k) mod G` and the phase on `(sΣa + tΣb) mod G`, so both
/// are tabulated exactly. The sum is then reduced without changing its value:
/// `F` is invariant under `(θ + c, φ − c)`, which pins `a_1 = 0` at the cost
/// of a factor `G`, and for fixed `θ` the sum over `φ` is a product of `n`
/// identical one-dimensional sums.
pub fn integral_numeric_with(
    spec: &TableSpec,
    grid: u64,
    limits: &QuadratureLimits,
) -> Result<IntegralEstimate> {
    let lambda = rational_to_f64(spec.positive_density()?.as_rational());
    let max_evals = limits.max_evals;
    if spec.m() + spec.n() > limits.max_dimension {
        return Err(Error::invalid(format!(
            "quadrature needs m + n ≤ {}, got {}",
            limits.max_dimension,
            spec.m() + spec.n()
        )));
    }
    if grid < MIN_GRID {
        return Err(Error::invalid(format!("grid needs at least {MIN_GRID} points per angle")));
    }
    let evaluations = quadrature_cost(spec, grid).unwrap_or(u64::MAX);
    if evaluations > max_evals {
        return Err(Error::ResourceLimit {
            what: format!("quadrature needs {evaluations} integrand evaluations"),
            cap: max_evals as u128,
        });
    }
    // the integral is unchanged by transposition, so sum over the shorter side
    let spec = if spec.m() > spec.n() { spec.transpose() } else { *spec };
    let (m, n, s, t) = (spec.m() as usize, spec.n() as usize, spec.s(), spec.t());
    let g = grid as usize;

    let root = |k: u64| Complex64::cis(TAU * (k % grid) as f64 / grid as f64);
    let one = Complex64::new(1.0, 0.0);
    let factors: Vec<Complex64> = (0..grid)
        .map(|u| (one - lambda * (root(u) - 1.0)).inv())
        .collect();
    let col_phase: Vec<Complex64> = (0..grid).map(|b| root(t % grid * b).conj()).collect();

    let outer = g.pow((m - 1) as u32);
    let slices: Vec<Complex64> = (0..outer)
        .into_par_iter()
        .map(|idx| {
            let mut a = vec![0usize; m];
            let mut rest = idx;
            for slot in a.iter_mut().skip(1) {
                *slot = rest % g;
                rest /= g;
            }
            let row_sum: u64 = a.iter().map(|&x| x as u64).sum();
            let terms: Vec<Complex64> = (0..g)
                .map(|b| {
                    let column = a.iter().fold(one, |acc, &aj| acc * factors[(aj + b) % g]);
                    column * col_phase[b]
                })
                .collect();
            let inner = pairwise_sum(&terms);
            root(s % grid * (row_sum % grid)).conj() * inner.powu(n as u32)
        })
        .collect();
    let total = pairwise_sum(&slices);
    let cells = (m + n) as i32;
    let value = total * (TAU.powi(cells) / (grid as f64).powi(cells - 1));
    Ok(IntegralEstimate {
        value,
        grid,
        evaluations,
    })
}

/// `M = (2π)^{−(m+n)} (λ^{−λ}(1+λ)^{1+λ})^{mn} Re I`.
pub fn reconstruct_m(spec: &TableSpec, value: Complex64) -> Result<f64> {
    let lambda = spec.positive_density()?;
    let cells = spec.cells() as f64;
    let ln_scale = cells * ln_entropy_factor(lambda.as_rational())
        - (spec.m() + spec.n()) as f64 * TAU.ln();
    Ok(ln_scale.exp() * value.re)
}

/// Outcome of sampling the modulus envelope on `|z| ≤ (1+λ)^{−1}/10`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma3Report {
    pub lambda: f64,
    pub z_max: f64,
    pub samples: usize,
    /// Sample points where `f(z)` exceeded the envelope.
    pub violations: Vec<f64>,
    /// Smallest and largest `ln(bound) − ln f(z)` seen.
    pub min_log_slack: f64,
    pub max_log_slack: f64,
}

impl Lemma3Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Relative rounding allowance when comparing `f(z)` with its envelope;
/// the two agree to fourth order at the origin.
const LEMMA3_ROUNDING: f64 = 4.0 * f64::EPSILON;

/// Checks `0 ≤ f(z) ≤ exp(−Az² + (A/12 + A²)z⁴)` at `z = 0`, both interval
/// ends and `samples` uniform points.
pub fn lemma3_bound_check(lambda: &BigRational, samples: usize, seed: u64) -> Result<Lemma3Report> {
    if *lambda <= BigRational::zero() {
        return Err(Error::ZeroDensity);
    }
    let lam = rational_to_f64(lambda);
    let a = lam * (1.0 + lam) / 2.0;
    let quartic = a / 12.0 + a * a;
    let z_max = 0.1 / (1.0 + lam);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixed = [0.0, z_max, -z_max];
    let random = (0..samples).map(|_| rng.gen_range(-z_max..=z_max));
    let mut report = Lemma3Report {
        lambda: lam,
        z_max,
        samples: samples + fixed.len(),
        violations: Vec::new(),
        min_log_slack: f64::INFINITY,
        max_log_slack: f64::NEG_INFINITY,
    };
    for z in fixed.into_iter().chain(random) {
        let f = envelope_factor(a, z);
        let z2 = z * z;
        let ln_bound = -a * z2 + quartic * z2 * z2;
        let slack = ln_bound - f.ln();
        report.min_log_slack = report.min_log_slack.min(slack);
        report.max_log_slack = report.max_log_slack.max(slack);
        if f < 0.0 || slack < -LEMMA3_ROUNDING {
            report.violations.push(z);
        }
    }
    Ok(report)
}

/// `N = ⌈6000(1+λ)⌉`, `δ = 2π/N` and the quartic `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma4Params {
    pub n_arc: u64,
    pub delta: f64,
    pub a: f64,
}

impl Lemma4Params {
    pub fn new(lambda: &BigRational) -> Result<Self> {
        if *lambda <= BigRational::zero() {
            return Err(Error::ZeroDensity);
        }
        let scaled = (BigRational::from_integer(BigInt::from(1)) + lambda)
            * BigRational::from_integer(BigInt::from(6000));
        let n_arc = scaled
            .ceil()
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::invalid("arc count exceeds 64 bits"))?;
        let lam = rational_to_f64(lambda);
        Ok(Lemma4Params {
            n_arc,
            delta: TAU / n_arc as f64,
            a: lam * (1.0 + lam) / 2.0,
        })
    }

    /// `g(x) = −Ax² + (9A/4 + 27A²)x⁴`.
    pub fn g(&self, x: f64) -> f64 {
        let x2 = x * x;
        -self.a * x2 + (2.25 * self.a + 27.0 * self.a * self.a) * x2 * x2
    }
}

pub const DEFAULT_ENVELOPE_CONSTANT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma4Report {
    pub params: Lemma4Params,
    pub k: u64,
    pub integral: f64,
    pub gaussian: f64,
    /// `integral / sqrt(π/(AK))`.
    pub ratio: f64,
    pub constant: f64,
    /// `exp(C(1/K + 1/(AK)))`.
    pub envelope: f64,
    pub quadrature_error: f64,
}

impl Lemma4Report {
    /// The proved statement is an upper bound.
    pub fn within_upper_envelope(&self) -> bool {
        self.ratio <= self.envelope
    }

    /// Whether the ratio is also above `1/envelope`; not part of the lemma.
    pub fn within_two_sided_envelope(&self) -> bool {
        self.within_upper_envelope() && self.ratio * self.envelope >= 1.0
    }
}

/// Integrates `exp(K g(x))` over `[−30δ, 30δ]` and compares it with
/// `sqrt(π/(AK))`.
pub fn lemma4_bound_check(lambda: &BigRational, k: u64, constant: f64) -> Result<Lemma4Report> {
    if k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    let params = Lemma4Params::new(lambda)?;
    let kf = k as f64;
    let gaussian = (PI / (params.a * kf)).sqrt();
    let edge = 30.0 * params.delta;
    let out = quadrature::integrate(|x| (kf * params.g(x)).exp(), -edge, edge, gaussian * 1e-13);
    let ratio = out.integral / gaussian;
    let envelope = (constant * (1.0 / kf + 1.0 / (params.a * kf))).exp();
    Ok(Lemma4Report {
        params,
        k,
        integral: out.integral,
        gaussian,
        ratio,
        constant,
        envelope,
        quadrature_error: out.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::count_bruteforce;
    use crate::numeric::ratio;
    use proptest::prelude::*;

    fn spec(m: u64, s: u64, n: u64, t: u64) -> TableSpec {
        TableSpec::new(m, s, n, t).unwrap()
    }

    #[test]
    fn origin_gives_one() {
        for sp in [spec(2, 3, 3, 2), spec(3, 100, 3, 100), spec(1, 2, 2, 1)] {
            let p = TorusPoint::origin(sp.m() as usize, sp.n() as usize);
            let f = integrand_f(&sp, &p).unwrap();
            assert!((f - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn torus_point_validation() {
        assert!(TorusPoint::new(vec![PI], vec![0.5]).is_ok());
        assert!(TorusPoint::new(vec![-PI], vec![0.5]).is_err());
        let w = TorusPoint::wrapped(vec![-PI, 3.0 * PI + 0.25], vec![7.0]);
        assert_eq!(w.theta()[0], PI);
        assert!((w.theta()[1] - (-PI + 0.25)).abs() < 1e-12);
        assert!(TorusPoint::new(w.theta().to_vec(), w.phi().to_vec()).is_ok());
    }

    #[test]
    fn modulus_matches_product_of_envelopes() {
        for sp in [spec(30, 1, 30, 1), spec(2, 2, 2, 2), spec(2, 10, 2, 10), spec(3, 100, 3, 100)] {
            let worst = lemma3_identity_check(&sp, 100, 7).unwrap();
            assert!(worst < 1e-12, "{sp}: {worst}");
        }
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let p = TorusPoint::origin(2, 2);
        assert!(integrand_f(&spec(2, 3, 3, 2), &p).is_err());
    }

    proptest! {
        #[test]
        fn periodic_in_each_angle(seed in any::<u64>(), which in 0usize..5, turns in -3i32..=3) {
            let sp = spec(2, 3, 3, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = TorusPoint::random(2, 3, &mut rng);
            let (mut th, mut ph) = (p.theta().to_vec(), p.phi().to_vec());
            let shift = TAU * turns as f64;
            if which < 2 { th[which] += shift } else { ph[which - 2] += shift }
            let q = TorusPoint::wrapped(th, ph);
            let (a, b) = (integrand_f(&sp, &p).unwrap(), integrand_f(&sp, &q).unwrap());
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }

        #[test]
        fn invariant_under_opposite_shift(seed in any::<u64>(), c in -PI..PI) {
            let sp = spec(2, 3, 3, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = TorusPoint::random(2, 3, &mut rng);
            let th = p.theta().iter().map(|x| x + c).collect();
            let ph = p.phi().iter().map(|x| x - c).collect();
            let q = TorusPoint::wrapped(th, ph);
            let (a, b) = (integrand_f(&sp, &p).unwrap(), integrand_f(&sp, &q).unwrap());
            prop_assert!((a - b).norm() <= 1e-11 * a.norm().max(1e-300), "{a} vs {b}");
        }
    }

    /// Plain tensor-product trapezoid with no reductions.
    fn naive_trapezoid(sp: &TableSpec, grid: usize) -> Complex64 {
        let (m, n) = (sp.m() as usize, sp.n() as usize);
        let dims = m + n;
        let mut total = Complex64::zero();
        let mut idx = vec![0usize; dims];
        loop {
            let angles: Vec<f64> = idx.iter().map(|&k| TAU * k as f64 / grid as f64).collect();
            let p = TorusPoint::wrapped(angles[..m].to_vec(), angles[m..].to_vec());
            total += integrand_f(sp, &p).unwrap();
            let mut d = 0;
            while d < dims {
                idx[d] += 1;
                if idx[d] < grid {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == dims {
                break;
            }
        }
        total * (TAU / grid as f64).powi(dims as i32)
    }

    #[test]
    fn reduced_sum_equals_plain_trapezoid() {
        for (sp, grid) in [(spec(2, 2, 2, 2), 8), (spec(2, 3, 3, 2), 8), (spec(3, 2, 2, 3), 9), (spec(1, 2, 2, 1), 10)] {
            let naive = naive_trapezoid(&sp, grid);
            let fast = integral_numeric(&sp, grid as u64).unwrap().value;
            assert!((naive - fast).norm() <= 1e-10 * naive.norm(), "{sp}: {naive} vs {fast}");
        }
    }

    #[test]
    fn reconstruction_recovers_small_counts() {
        for sp in [spec(2, 2, 2, 2), spec(2, 1, 2, 1), spec(2, 3, 3, 2), spec(1, 2, 2, 1), spec(3, 2, 3, 2)] {
            let est = integral_numeric(&sp, 64).unwrap();
            let exact = count_bruteforce(&sp).unwrap().value().to_f64().unwrap();
            let got = reconstruct_m(&sp, est.value).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-6, "{sp}: {got} vs {exact}");
            assert!(est.imaginary_residue() < 1e-8, "{sp}");
        }
    }

    #[test]
    fn trapezoid_converges_fast() {
        let sp = spec(2, 3, 3, 2);
        let err = |g| (reconstruct_m(&sp, integral_numeric(&sp, g).unwrap().value).unwrap() - 7.0).abs();
        let (e16, e32) = (err(16), err(32));
        assert!(e32 < e16 * 1e-3 || e32 < 1e-12, "{e16} {e32}");
    }

    #[test]
    fn quadrature_limits() {
        assert!(integral_numeric(&spec(4, 3, 3, 4), 8).is_err());
        assert!(integral_numeric(&spec(2, 2, 2, 2), 4).is_err());
        let tight = QuadratureLimits {
            max_evals: 1000,
            ..QuadratureLimits::default()
        };
        let err = integral_numeric_with(&spec(3, 3, 3, 3), 64, &tight).unwrap_err();
        assert!(err.is_resource_limit());
        let wide = QuadratureLimits {
            max_dimension: 7,
            ..QuadratureLimits::default()
        };
        assert!(integral_numeric_with(&spec(4, 3, 3, 4), 8, &wide).is_ok());
        assert_eq!(quadrature_cost(&spec(2, 3, 3, 2), 64), Some(64 * 64 * 5));
    }

    #[test]
    fn lemma3_holds_on_sample_densities() {
        for lam in [ratio(1, 30), ratio(1, 1), ratio(5, 1), ratio(100, 3)] {
            let r = lemma3_bound_check(&lam, 20_000, 3).unwrap();
            assert!(r.passed(), "{lam}: {:?}", &r.violations[..r.violations.len().min(5)]);
            assert!(r.min_log_slack.abs() < 1e-15, "equality at the origin");
        }
        assert!(lemma3_bound_check(&ratio(0, 1), 10, 0).is_err());
    }

    #[test]
    fn lemma4_parameters() {
        let p = Lemma4Params::new(&ratio(1, 1)).unwrap();
        assert_eq!(p.n_arc, 12_000);
        assert!((p.delta * p.n_arc as f64 - TAU).abs() < 1e-12);
        assert_eq!(p.g(0.0), 0.0);
        assert!(p.g(1e-3) < 0.0 && p.g(-0.01) < 0.0);
        assert_eq!(Lemma4Params::new(&ratio(1, 30)).unwrap().n_arc, 6200);
        assert_eq!(Lemma4Params::new(&ratio(1, 7)).unwrap().n_arc, 6858);
    }

    #[test]
    fn lemma4_ratio_follows_the_quartic_correction() {
        // ∫ exp(K(−Ax² + Bx⁴)) = sqrt(π/(AK)) (1 + 3B/(4A²K) + O(K⁻²)) once
        // the window ±30δ holds the Gaussian
        for lam in [ratio(1, 30), ratio(1, 1), ratio(5, 1), ratio(100, 3)] {
            let k = 1_000_000;
            let r = lemma4_bound_check(&lam, k, 25.0).unwrap();
            let a = r.params.a;
            let b = 2.25 * a + 27.0 * a * a;
            let predicted = 3.0 * b / (4.0 * a * a);
            assert!(((r.ratio - 1.0) * k as f64 - predicted).abs() < 0.2, "{lam}: {r:?}");
            assert!(r.within_upper_envelope(), "{lam}: {r:?}");
        }
    }

    #[test]
    fn lemma4_default_constant_is_flagged_at_unit_density() {
        let lam = ratio(1, 1);
        let ratios: Vec<f64> = [1u64, 100, 10_000]
            .iter()
            .map(|&k| {
                let r = lemma4_bound_check(&lam, k, DEFAULT_ENVELOPE_CONSTANT).unwrap();
                assert!(r.within_upper_envelope(), "K={k}: {r:?}");
                r.ratio
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[0] < w[1]), "{ratios:?}");
        // the second-order term is about 21.9/K while the envelope allows 20/K
        let r = lemma4_bound_check(&lam, 100_000, DEFAULT_ENVELOPE_CONSTANT).unwrap();
        assert!(!r.within_upper_envelope());
        assert!(r.ratio - 1.0 < 2.5e-4);
        assert!(lemma4_bound_check(&lam, 0, 10.0).is_err());
    }
}
