//! Rebuilds small counts from the contour integral on the torus and shows
//! how fast the periodic trapezoid rule converges.
//!
//! ```text
//! cargo run --release --example integral_identity
//! ```

use contab::integral::{integral_numeric, reconstruct_m};
use contab::{count_exact, TableSpec};
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [(1, 2, 2, 1), (2, 1, 2, 1), (2, 2, 2, 2), (2, 3, 3, 2), (3, 2, 3, 2), (2, 6, 4, 3)];
    println!("{:<10} {:>6} {:>22} {:>12} {:>12}", "spec", "grid", "rebuilt", "rel. error", "Im/Re");
    for (m, s, n, t) in specs {
        let spec = TableSpec::new(m, s, n, t)?;
        let exact = count_exact(&spec)?.value().to_f64().unwrap();
        for grid in [8, 16, 32, 64] {
            let est = integral_numeric(&spec, grid)?;
            let rebuilt = reconstruct_m(&spec, est.value)?;
            println!(
                "{:<10} {grid:>6} {rebuilt:>22.12} {:>12.2e} {:>12.2e}",
                spec.to_string(),
                ((rebuilt - exact) / exact).abs(),
                est.imaginary_residue()
            );
        }
        println!("{:<10} {:>6} {exact:>22.12}", "", "exact");
    }
    Ok(())
}
