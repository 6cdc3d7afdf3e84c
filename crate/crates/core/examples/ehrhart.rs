//! Counting polynomials `L(q)` for small shapes, with their h-vectors and
//! normalized volumes. Pass `m n [q]` for one shape.
//!
//! ```text
//! cargo run --release --example ehrhart
//! cargo run --release --example ehrhart -- 3 3 100
//! ```

use contab::ehrhart::ehrhart_polynomial;
use contab::ExactConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let (shapes, eval) = match args.as_slice() {
        [m, n] => (vec![(*m, *n)], None),
        [m, n, q] => (vec![(*m, *n)], Some(*q)),
        _ => (vec![(2, 2), (2, 3), (3, 3), (2, 4), (3, 4), (4, 4)], Some(100)),
    };
    for (m, n) in shapes {
        let p = ehrhart_polynomial(m, n, &ExactConfig::default())?;
        let (s0, t0) = p.base_margins();
        let h: Vec<String> = p.h_vector().iter().map(|x| x.to_string()).collect();
        println!("{m}×{n}: s = {s0}q, t = {t0}q, degree {}", p.degree());
        println!("  L(q) = {p}");
        println!("  h = ({})  volume {}", h.join(", "), p.leading_factored());
        if let Some(q) = eval {
            println!("  L({q}) = {}  for {}", p.evaluate(q)?, p.spec_at(q)?);
        }
    }
    Ok(())
}
