//! Table shapes and their density.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The shape `(m, s; n, t)` of an `m × n` nonnegative integer matrix whose
/// rows all sum to `s` and whose columns all sum to `t`.
///
/// Construction enforces `m, n ≥ 1` and the balance `m·s = n·t`. The zero
/// margin `s = t = 0` is admitted; it is counted by the all-zero matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableSpec {
    m: u64,
    s: u64,
    n: u64,
    t: u64,
}

impl TableSpec {
    pub fn new(m: u64, s: u64, n: u64, t: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::NonPositiveDimension { name: "m" });
        }
        if n == 0 {
            return Err(Error::NonPositiveDimension { name: "n" });
        }
        let ms = m as u128 * s as u128;
        let nt = n as u128 * t as u128;
        if ms != nt {
            return Err(Error::Balance { m, s, n, t, ms, nt });
        }
        Ok(TableSpec { m, s, n, t })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Swaps the roles of rows and columns: `(m, s; n, t) ↦ (n, t; m, s)`.
    pub fn transpose(&self) -> TableSpec {
        TableSpec {
            m: self.n,
            s: self.t,
            n: self.m,
            t: self.s,
        }
    }

    /// Sum of all entries, `m·s = n·t`.
    pub fn total(&self) -> u128 {
        self.m as u128 * self.s as u128
    }

    /// Number of cells, `m·n`.
    pub fn cells(&self) -> u128 {
        self.m as u128 * self.n as u128
    }

    pub fn density(&self) -> Density {
        Density::from_ratio(self.s, self.n)
    }

    /// The density, failing for the zero-margin spec. The estimators all
    /// need `λ > 0`.
    pub fn positive_density(&self) -> Result<Density> {
        let d = self.density();
        if d.is_zero() {
            Err(Error::ZeroDensity)
        } else {
            Ok(d)
        }
    }
}

impl fmt::Display for TableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.m, self.s, self.n, self.t)
    }
}

/// Average matrix entry `λ = s/n = t/m`, held as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density(BigRational);

impl Density {
    fn from_ratio(num: u64, den: u64) -> Self {
        Density(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
