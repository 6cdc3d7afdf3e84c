//! Samples the two integrand envelopes: the pointwise bound on `f(z)` near
//! the origin, and the quartic Gaussian integral against `sqrt(π/(AK))`.
//!
//! ```text
//! cargo run --release --example lemma_bounds
//! ```

use contab::integral::{lemma3_bound_check, lemma4_bound_check, DEFAULT_ENVELOPE_CONSTANT};
use contab::numeric::ratio;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let densities = [ratio(1, 30), ratio(1, 1), ratio(5, 1), ratio(100, 3)];

    println!("pointwise envelope, 10^5 samples per density");
    for lam in &densities {
        let r = lemma3_bound_check(lam, 100_000, 1)?;
        println!(
            "  λ = {lam:<6} |z| ≤ {:.3e}  violations {}  log slack in [{:.2e}, {:.2e}]",
            r.z_max,
            r.violations.len(),
            r.min_log_slack,
            r.max_log_slack
        );
    }

    println!("\nquartic integral ratio, C = {DEFAULT_ENVELOPE_CONSTANT}");
    for lam in &densities {
        for k in [1u64, 10, 100, 1_000, 10_000, 100_000, 1_000_000] {
            let r = lemma4_bound_check(lam, k, DEFAULT_ENVELOPE_CONSTANT)?;
            let flag = if r.within_upper_envelope() { "" } else { "  above envelope" };
            println!(
                "  λ = {lam:<6} K = {k:<8} ratio {:.9}  envelope {:.4e}  (ratio−1)·K = {:.3}{flag}",
                r.ratio,
                r.envelope,
                (r.ratio - 1.0) * k as f64
            );
        }
    }
    Ok(())
}
