//! Importance-sampling estimates with their standard errors, checked
//! against exact counts. Pass `m s n t samples seed` to run one spec.
//!
//! ```text
//! cargo run --release --example monte_carlo
//! cargo run --release --example monte_carlo -- 10 20 10 20 100000 7
//! ```

use contab::montecarlo::{audit_proposal, mc_estimate};
use contab::{count_exact, TableSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let runs = if args.len() == 6 {
        vec![((args[0], args[1], args[2], args[3]), args[4], args[5])]
    } else {
        vec![
            ((2, 2, 2, 2), 10_000, 1),
            ((3, 100, 3, 100), 100_000, 1),
            ((6, 4, 8, 3), 100_000, 1),
            ((30, 3, 30, 3), 20_000, 1),
        ]
    };
    for ((m, s, n, t), samples, seed) in runs {
        let spec = TableSpec::new(m, s, n, t)?;
        let est = mc_estimate(&spec, samples, seed)?;
        let exact = count_exact(&spec)?;
        println!(
            "{spec:<12} {} ± {:.3}%  (ESS {:.0} of {samples}, seed {seed})  exact {}  z = {:+.2}",
            est.mean.scientific(6),
            100.0 * est.relative_standard_error(),
            est.effective_sample_size,
            exact.as_log().scientific(6),
            est.z_score(exact.ln()),
        );
    }

    println!("\nexact proposal audit");
    for (m, s, n, t) in [(2, 3, 3, 2), (3, 3, 3, 3), (2, 4, 4, 2)] {
        let spec = TableSpec::new(m, s, n, t)?;
        let audit = audit_proposal(&spec)?;
        println!(
            "{spec:<12} E[weight] = {}  Σ q = {}  over {} tables",
            audit.expected_weight, audit.total_probability, audit.paths
        );
    }
    Ok(())
}
