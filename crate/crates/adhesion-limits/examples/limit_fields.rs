//! Limit velocity and density potential with zone labels on a small grid.
//!
//! Run with `cargo run --example limit_fields`.

use adhesion_limits::limit_solution::{Fidelity, LimitSolution};
use adhesion_limits::ProblemParams;

fn main() -> adhesion_limits::Result<()> {
    let p = ProblemParams::new(0.0, 1.0, 2.0, 3.0, 1.0, -1.0, 1.0, 2.0)?;
    let sol = LimitSolution::new(p, Fidelity::Corrected);
    for t in [0.5, 1.0, 3.0] {
        println!("t = {t}");
        for k in 0..=12 {
            let x = -1.5 + 0.4 * k as f64;
            let (u, r) = (sol.u(x, t), sol.r(x, t));
            let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:+.5}"));
            println!("  x = {x:+.2}  u = {:>9}  R = {:>9}  {}", show(u.value), show(r.value), u.label());
        }
    }
    Ok(())
}
