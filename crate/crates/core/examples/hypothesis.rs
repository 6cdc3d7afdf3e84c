//! The growth condition `(1+2λ)²/(4λ(1+λ)) · (1 + 5m/(6n) + 5n/(6m)) ≤ a·ln n`
//! for a few shapes: its exact left side and the smallest `a` that works.
//!
//! ```text
//! cargo run --release --example hypothesis
//! ```

use contab::estimators::hypothesis_lhs;
use contab::TableSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        (5, 5, 5, 5),
        (100, 100, 100, 100),
        (3, 100, 3, 100),
        (3, 98, 49, 6),
        (30, 3, 30, 3),
        (10, 20, 10, 20),
        (1000, 1, 1000, 1),
    ];
    for (m, s, n, t) in specs {
        let spec = TableSpec::new(m, s, n, t)?;
        let r = hypothesis_lhs(&spec)?;
        let min_a = r.min_a.map_or("-".to_string(), |a| format!("{a:.4}"));
        println!(
            "{:<16} λ = {:<6} lhs = {:<14} ≈ {:>9.4}  smallest a = {min_a}",
            spec.to_string(),
            spec.density().to_string(),
            r.lhs.to_string(),
            r.lhs_f64()
        );
    }
    Ok(())
}
