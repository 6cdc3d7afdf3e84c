//! The offset Δ that places each exact count on the conjectured form
//! `V(Δ)`, for every balanced spec with `2 ≤ m, n ≤ 6` and `1 ≤ s ≤ 6`.
//! The conjecture puts every Δ strictly between 0 and 2.
//!
//! ```text
//! cargo run --release --example conjecture_sweep
//! ```

use contab::estimators::conj1_delta;
use contab::{count_exact, TableSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut outside = Vec::new();
    let mut deltas = Vec::new();
    for m in 2..=6u64 {
        for n in m..=6u64 {
            let mut line = format!("{m}×{n}:");
            for s in 1..=6u64 {
                if (m * s) % n != 0 {
                    continue;
                }
                let spec = TableSpec::new(m, s, n, m * s / n)?;
                let delta = conj1_delta(&spec, &count_exact(&spec)?)?;
                line.push_str(&format!("  s={s} Δ={delta:.4}"));
                if !(delta > 0.0 && delta < 2.0) {
                    outside.push(spec);
                }
                deltas.push(delta);
            }
            println!("{line}");
        }
    }
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("\n{} specs (m ≤ n), Δ in [{lo:.4}, {hi:.4}]", deltas.len());
    if outside.is_empty() {
        println!("no spec falls outside (0, 2)");
    } else {
        let list: Vec<String> = outside.iter().map(|s| s.to_string()).collect();
        println!("outside (0, 2): {}", list.join("  "));
    }
    Ok(())
}
