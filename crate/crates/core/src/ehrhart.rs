//! Ehrhart polynomial of the constant-margin transportation polytope.
//!
//! For fixed `m, n` let `s₀ = lcm(m,n)/m` and `t₀ = lcm(m,n)/n`. Every
//! balanced `(m, s; n, t)` is `(m, q·s₀; n, q·t₀)` for one integer `q`, and
//! the count is a polynomial `L(q)` of degree `d = (m−1)(n−1)`. It is
//! recovered here by exact interpolation of `L(0), …, L(d)` and checked
//! against `L(d+1)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{count_exact_with, ExactConfig};
use crate::numeric::{binomial, factorial, CountExact};
use crate::table::TableSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct EhrhartPolynomial {
    m: u64,
    n: u64,
    s0: u64,
    t0: u64,
    degree: usize,
    /// Monomial coefficients, constant term first.
    coeffs: Vec<BigRational>,
    /// `h[j]` multiplies `C(q + d − j, d)`.
    h: Vec<BigRational>,
}

/// Base margins `(s₀, t₀)` for an `m × n` shape.
pub fn base_margins(m: u64, n: u64) -> (u64, u64) {
    let (bm, bn) = (BigUint::from(m), BigUint::from(n));
    let lcm = bm.lcm(&bn);
    let s0 = (&lcm / &bm).to_u64().expect("s0 fits in u64");
    let t0 = (&lcm / &bn).to_u64().expect("t0 fits in u64");
    (s0, t0)
}

/// Builds `L(q)` using the exact counter with the given configuration.
pub fn ehrhart_polynomial(m: u64, n: u64, config: &ExactConfig) -> Result<EhrhartPolynomial> {
    ehrhart_polynomial_with(m, n, |spec| count_exact_with(spec, config))
}

/// Builds `L(q)` from any exact counting routine.
pub fn ehrhart_polynomial_with<F>(m: u64, n: u64, mut counter: F) -> Result<EhrhartPolynomial>
where
    F: FnMut(&TableSpec) -> Result<CountExact>,
{
    if m == 0 || n == 0 {
        return Err(Error::NonPositiveDimension {
            name: if m == 0 { "m" } else { "n" },
        });
    }
    let (s0, t0) = base_margins(m, n);
    let degree = ((m - 1) * (n - 1)) as usize;

    let mut values = Vec::with_capacity(degree + 2);
    for q in 0..=degree as u64 + 1 {
        let spec = TableSpec::new(m, q * s0, n, q * t0)?;
        values.push(counter(&spec)?.into_value());
    }

    let newton = forward_differences(&values);
    if !newton[degree + 1].is_zero() {
        return Err(Error::Verification(format!(
            "L({}) disagrees with the degree-{degree} interpolant",
            degree + 1
        )));
    }
    let coeffs = newton_to_monomial(&newton[..=degree]);
    let h = h_vector(&values[..=degree], degree);

    let poly = EhrhartPolynomial {
        m,
        n,
        s0,
        t0,
        degree,
        coeffs,
        h,
    };
    poly.verify()?;
    Ok(poly)
}

/// Leading entries of the forward-difference table, `Δ^k L(0)`.
fn forward_differences(values: &[BigUint]) -> Vec<BigInt> {
    let mut row: Vec<BigInt> = values.iter().cloned().map(BigInt::from).collect();
    let mut out = Vec::with_capacity(values.len());
    while !row.is_empty() {
        out.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// Expands `Σ a_k C(q, k)` into monomial coefficients.
fn newton_to_monomial(newton: &[BigInt]) -> Vec<BigRational> {
    let len = newton.len();
    let mut coeffs = vec![BigRational::zero(); len];
    // falling factorial q(q−1)…(q−k+1), monomial coefficients
    let mut falling: Vec<BigInt> = vec![BigInt::one()];
    for (k, a) in newton.iter().enumerate() {
        let k_fact = BigInt::from(factorial(k as u64));
        for (i, c) in falling.iter().enumerate() {
            coeffs[i] += BigRational::new(a * c, k_fact.clone());
        }
        let mut next = vec![BigInt::zero(); falling.len() + 1];
        for (i, c) in falling.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigInt::from(k);
        }
        falling = next;
    }
    coeffs
}

/// Solves `L(q) = Σ_{j ≤ q} h_j C(q + d − j, d)` for `q = 0..d`.
fn h_vector(values: &[BigUint], degree: usize) -> Vec<BigRational> {
    let d = degree as u64;
    let mut h: Vec<BigInt> = Vec::with_capacity(degree + 1);
    for (q, value) in values.iter().enumerate() {
        let mut rest = BigInt::from(value.clone());
        for (j, hj) in h.iter().enumerate() {
            rest -= hj * BigInt::from(binomial(q as u64 + d - j as u64, d));
        }
        h.push(rest);
    }
    h.into_iter().map(BigRational::from_integer).collect()
}

impl EhrhartPolynomial {
    fn verify(&self) -> Result<()> {
        if self.coeffs[0] != BigRational::one() {
            return Err(Error::Verification(format!("L(0) = {} ≠ 1", self.coeffs[0])));
        }
        if self.leading_coefficient().is_zero() {
            return Err(Error::Verification(format!(
                "leading coefficient vanishes; degree below {}",
                self.degree
            )));
        }
        if let Some((j, hj)) = self.h.iter().enumerate().find(|(_, hj)| hj.is_negative()) {
            return Err(Error::Verification(format!("h_{j} = {hj} is negative")));
        }
        let sum: BigRational = self.h.iter().sum();
        if sum != self.normalized_volume() {
            return Err(Error::Verification(format!(
                "Σh = {sum} ≠ d!·leading = {}",
                self.normalized_volume()
            )));
        }
        Ok(())
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn base_margins(&self) -> (u64, u64) {
        (self.s0, self.t0)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn h_vector(&self) -> &[BigRational] {
        &self.h
    }

    /// Relative volume of the polytope.
    pub fn leading_coefficient(&self) -> &BigRational {
        &self.coeffs[self.degree]
    }

    /// `d!` times the leading coefficient; an integer for lattice polytopes.
    pub fn normalized_volume(&self) -> BigRational {
        self.leading_coefficient() * BigRational::from_integer(BigInt::from(factorial(self.degree as u64)))
    }

    /// The spec counted by `L(q)`.
    pub fn spec_at(&self, q: u64) -> Result<TableSpec> {
        TableSpec::new(self.m, q * self.s0, self.n, q * self.t0)
    }

    /// `L(q)`; fails unless the value is a nonnegative integer.
    pub fn evaluate(&self, q: u64) -> Result<CountExact> {
        let x = BigRational::from_integer(BigInt::from(q));
        let value = self
            .coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c);
        if !value.is_integer() || value.is_negative() {
            return Err(Error::Verification(format!("L({q}) = {value} is not a count")));
        }
        Ok(CountExact::new(value.to_integer().magnitude().clone()))
    }

    /// The leading coefficient written as `k/d!`.
    pub fn leading_factored(&self) -> String {
        format!("{}/{}!", self.normalized_volume(), self.degree)
    }
}

impl fmt::Display for EhrhartPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "({mag})q")?,
                _ => write!(f, "({mag})q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
