//! Exact counts for the rows of the comparison table, plus any spec given on
//! the command line as `m s n t`.
//!
//! ```text
//! cargo run --release --example exact_counts
//! cargo run --release --example exact_counts -- 10 20 10 20
//! ```

use std::time::Instant;

use contab::{count_exact, TableSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let specs = if args.len() == 4 {
        vec![(args[0], args[1], args[2], args[3])]
    } else {
        vec![(3, 100, 3, 100), (3, 98, 49, 6), (3, 99, 9, 33), (30, 3, 30, 3)]
    };
    for (m, s, n, t) in specs {
        let spec = TableSpec::new(m, s, n, t)?;
        let start = Instant::now();
        let count = count_exact(&spec)?;
        println!(
            "M({m},{s};{n},{t}) = {count}\n    ≈ {}  [{:.2?}]",
            count.as_log().scientific(6),
            start.elapsed()
        );
    }
    Ok(())
}
