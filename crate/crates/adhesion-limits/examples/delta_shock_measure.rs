//! The limit density as a measure: atoms on the delta-shock curves, their
//! weights over time, and the weak-form residuals.
//!
//! Run with `cargo run --example delta_shock_measure`.

use adhesion_limits::limit_solution::{Fidelity, LimitSolution};
use adhesion_limits::measure_recovery::{
    burgers_bumps, burgers_weak_residual, check_distributional_derivative, interior_bumps, rho_measure,
};
use adhesion_limits::ProblemParams;

fn main() -> adhesion_limits::Result<()> {
    let p = ProblemParams::new(0.0, 1.0, 2.0, 3.0, 1.0, -1.0, 1.0, 2.0)?;
    let sol = LimitSolution::new(p, Fidelity::Corrected);
    for t in [0.25, 0.75, 1.5, 3.0, 6.0] {
        let m = rho_measure(&sol, t)?;
        let atoms: Vec<String> =
            m.atoms.iter().map(|a| format!("{:.4}·δ({:.4}) on {}", a.weight, a.x, a.carrier.as_str())).collect();
        println!("t = {t}: {}", atoms.join(", "));
    }
    let worst_dist = interior_bumps(&sol, 10, 3)
        .iter()
        .map(|phi| check_distributional_derivative(&sol, phi, 1e-6).map(|r| r.residual))
        .collect::<adhesion_limits::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let worst_burgers = burgers_bumps(&sol, 10, 3)
        .iter()
        .map(|phi| burgers_weak_residual(&sol, phi, 1e-6).map(|r| r.residual))
        .collect::<adhesion_limits::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("worst residual: ρ = R_x {worst_dist:.1e}, Burgers {worst_burgers:.1e}");
    Ok(())
}
