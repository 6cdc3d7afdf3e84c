//! Closed-form estimates next to the exact count for the six comparison
//! rows. The exact column is skipped for the largest instances unless
//! `--all` is given; (10,20,10,20) alone takes several minutes.
//!
//! ```text
//! cargo run --release --example table_comparison
//! cargo run --release --example table_comparison -- --all
//! ```

use contab::estimators::{
    conj1_interval, cor1_estimate, good_estimate, thm1_closed_estimate, thm1_estimate,
};
use contab::{count_exact, TableSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let all = std::env::args().any(|a| a == "--all");
    let rows = [
        (3, 100, 3, 100),
        (3, 98, 49, 6),
        (3, 99, 9, 33),
        (10, 20, 10, 20),
        (18, 13, 18, 13),
        (30, 3, 30, 3),
    ];
    println!(
        "{:<13} {:>11} {:>11} {:>11} {:>11} {:>21} {:>12}",
        "m,s,n,t", "G", "thm1", "thm1-closed", "Cor1", "Conj1", "Exact"
    );
    for (m, s, n, t) in rows {
        let spec = TableSpec::new(m, s, n, t)?;
        let slow = spec.m().min(spec.n()) >= 10 && spec.s() >= 10;
        let exact = if slow && !all {
            "-".to_string()
        } else {
            count_exact(&spec)?.as_log().scientific(6).to_string()
        };
        println!(
            "{:<13} {:>11} {:>11} {:>11} {:>11} {:>21} {:>12}",
            spec.to_string(),
            good_estimate(&spec)?.to_string(),
            thm1_estimate(&spec)?.to_string(),
            thm1_closed_estimate(&spec)?.to_string(),
            cor1_estimate(&spec)?.to_string(),
            conj1_interval(&spec)?.render(4).to_string(),
            exact
        );
    }
    Ok(())
}
