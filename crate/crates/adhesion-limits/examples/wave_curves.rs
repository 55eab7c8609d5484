//! Curve networks and closed-form intersection times for every sign case.
//!
//! Run with `cargo run --example wave_curves`.

use adhesion_limits::limit_solution::{Fidelity, LimitSolution};
use adhesion_limits::ProblemParams;

fn main() -> adhesion_limits::Result<()> {
    for (u_a, u_b) in [(-1.0, 1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, -3.0)] {
        let p = ProblemParams::new(0.0, 1.0, 2.0, 3.0, u_a, u_b, 1.0, 2.0)?;
        let sol = LimitSolution::new(p, Fidelity::Corrected);
        println!(
            "u_a = {u_a}, u_b = {u_b}: {} {} ({})",
            sol.case.case_id.as_str(),
            sol.case.subcase.as_str(),
            sol.curves.completeness.as_str()
        );
        for c in &sol.curves.curves {
            let samples: Vec<String> = [0.5, 1.0, 2.0, 4.0].iter().map(|&t| format!("{:.4}", c.eval(t))).collect();
            println!("  {:<9} x(0.5, 1, 2, 4) = {}", c.label.as_str(), samples.join(", "));
        }
        for i in &sol.curves.intersections {
            println!("  {:<10} t = {:.6}, x = {:.6}, gap {:.1e}", i.name, i.t, i.x(), i.relative_gap());
        }
    }
    Ok(())
}
