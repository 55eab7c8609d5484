//! Closed-form `V^ε`, `S^ε` against Gaussian-moment quadrature and a
//! Crank–Nicolson solve of the heat equation with Richardson extrapolation.
//!
//! Run with `cargo run --example oracle_crosscheck`.

use adhesion_limits::oracle_quadrature::{richardson_v, s_quad, v_quad};
use adhesion_limits::viscous_exact::{s_eps, s_eps_magnitude, v_eps};
use adhesion_limits::ProblemParams;

fn main() -> adhesion_limits::Result<()> {
    let p = ProblemParams::new(0.0, 1.0, 2.0, 3.0, 1.0, -1.0, 1.0, 2.0)?;
    println!("closed form vs quadrature");
    for (x, t, eps) in [(-1.0, 0.5, 1.0), (0.5, 1.0, 0.1), (2.5, 2.0, 0.01), (4.0, 3.0, 0.01)] {
        let (vc, vq) = (v_eps(&p, x, t, eps)?, v_quad(&p, x, t, eps, 1e-12)?);
        let (sc, sq) = (s_eps(&p, x, t, eps)?, s_quad(&p, x, t, eps, 1e-12)?);
        let rv = vc.relative_difference(vq.value, vq.value);
        let rs = sc.relative_difference(sq.value, s_eps_magnitude(&p, x, t, eps)?);
        println!("  (x, t, ε) = ({x}, {t}, {eps}): rel V {rv:.1e}, rel S {rs:.1e}, ln V = {:.4}", vc.ln_abs());
    }
    println!("finite differences at ε = 0.5, t = 1");
    let probes = [-0.5, 0.5, 1.5, 2.5, 3.5];
    for r in richardson_v(&p, 0.5, 1.0, &probes, 1.0 / 40.0, 10.0)? {
        let exact = v_eps(&p, r.x, r.t, 0.5)?.to_f64()?;
        println!(
            "  x = {:+.1}: V = {exact:.12}, extrapolated {:.12}, observed order {:.3}",
            r.x, r.extrapolated, r.observed_order
        );
    }
    Ok(())
}
