//! Splits exact counts as `M = N·P₁·P₂·E`: all tables with the right
//! total, the chance that a uniform one has the right row sums, the same
//! for columns, and the correction `E` for the dependence between them.
//!
//! ```text
//! cargo run --release --example remark1
//! ```

use contab::estimators::remark1_decompose;
use contab::numeric::rational_to_f64;
use contab::{count_exact, TableSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (m, s, n, t) in [(2, 3, 3, 2), (2, 2, 2, 2), (3, 2, 3, 2), (4, 3, 6, 2), (3, 100, 3, 100), (1, 6, 3, 2)] {
        let spec = TableSpec::new(m, s, n, t)?;
        let exact = count_exact(&spec)?;
        let d = remark1_decompose(&spec, &exact)?;
        let e = if d.correction.denom().bits() < 64 {
            d.correction.to_string()
        } else {
            "(long rational)".into()
        };
        println!(
            "{spec:<12} M = {exact:<10} N = {:<12} P1 = {:.4e}  P2 = {:.4e}  E = {e} ≈ {:.6}",
            d.total_tables.as_log().to_string(),
            rational_to_f64(&d.row_probability),
            rational_to_f64(&d.column_probability),
            rational_to_f64(&d.correction),
        );
    }
    Ok(())
}
