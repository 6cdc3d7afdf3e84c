//! Counting `m × n` nonnegative integer matrices whose rows all sum to `s`
//! and whose columns all sum to `t`.

pub mod error;
pub mod cli;
pub mod ehrhart;
pub mod estimators;
pub mod exact;
pub mod integral;
pub mod montecarlo;
pub mod numeric;
pub mod table;

pub use error::{Error, Result};
pub use exact::{count_bruteforce, count_exact, count_exact_with, ExactConfig};
pub use numeric::{log_binomial, CountExact, EstimateInterval, LogEstimate};
pub use table::{Density, TableSpec};
