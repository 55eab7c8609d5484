//! Errors of `u^ε` and `R^ε` against the limit fields as ε decreases.
//!
//! Run with `cargo run --example vanishing_viscosity`.

use adhesion_limits::limit_solution::{probe_points, verify_limit_convergence, ConvergenceTolerances, Fidelity, LimitSolution};
use adhesion_limits::ProblemParams;

fn main() -> adhesion_limits::Result<()> {
    let p = ProblemParams::new(0.0, 1.0, 2.0, 3.0, -1.0, -1.0, 1.0, 2.0)?;
    let sol = LimitSolution::new(p, Fidelity::Corrected);
    let eps = [1e-1, 1e-2, 1e-3, 1e-4];
    let pts: Vec<(f64, f64)> =
        probe_points(&sol, &[1.0, 3.0], (-4.0, 6.0), 0.1).into_iter().map(|(x, t, _)| (x, t)).collect();
    let report = verify_limit_convergence(&sol, &pts, &eps, ConvergenceTolerances::default())?;
    println!("{} {}: pass = {}", report.case, report.subcase, report.pass);
    for pc in &report.points {
        let errs: Vec<String> = pc.u_errors.iter().map(|e| format!("{e:.1e}")).collect();
        println!("  ({:+.3}, {:.1}) {:<12} u = {:+.4}  |u^ε − u|: {}", pc.x, pc.t, pc.zone, pc.u_limit, errs.join(" "));
    }
    Ok(())
}
