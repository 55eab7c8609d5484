//! Fan-zone density potential and Case-4 atoms under the three fidelity modes.
//!
//! Run with `cargo run --example printed_vs_corrected`.

use adhesion_limits::limit_solution::{Fidelity, LimitSolution};
use adhesion_limits::measure_recovery::{check_distributional_derivative, interior_bumps, rho_measure};
use adhesion_limits::ProblemParams;

fn main() -> adhesion_limits::Result<()> {
    let modes = [Fidelity::Corrected, Fidelity::AsPrinted, Fidelity::AsPrintedDroppedConstants];
    let fan = ProblemParams::new(0.0, 1.0, 2.0, 3.0, -1.0, 1.0, 1.0, 2.0)?;
    println!("R in the fan at a, t = 1");
    for f in modes {
        let sol = LimitSolution::new(fan, f);
        let vals: Vec<String> = [-0.9, -0.5, -0.1].iter().map(|&x| format!("{:+.4}", sol.r(x, 1.0).value.unwrap_or(f64::NAN))).collect();
        println!("  {:<30} {}", f.as_str(), vals.join(" "));
    }
    let case4 = ProblemParams::new(0.0, 1.0, 2.0, 3.0, -1.0, -1.0, 1.0, 2.0)?;
    println!("Case 4 at t = 3");
    for f in modes {
        let sol = LimitSolution::new(case4, f);
        let m = rho_measure(&sol, 3.0)?;
        let atoms: Vec<String> = m.atoms.iter().map(|a| format!("{:+.4} on {}", a.weight, a.carrier.as_str())).collect();
        let fails = interior_bumps(&sol, 20, 1)
            .iter()
            .map(|phi| check_distributional_derivative(&sol, phi, 1e-6).map(|r| !r.pass))
            .collect::<adhesion_limits::Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&f| f)
            .count();
        println!("  {:<30} atoms [{}], failed ρ = R_x checks: {fails}/20", f.as_str(), atoms.join(", "));
    }
    Ok(())
}
