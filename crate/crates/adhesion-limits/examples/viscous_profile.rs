//! Viscous velocity and density potential across the initial data at shrinking ε.
//!
//! Run with `cargo run --example viscous_profile`.

use adhesion_limits::viscous_exact::{u_eps_naive, viscous_state};
use adhesion_limits::ProblemParams;

fn main() -> adhesion_limits::Result<()> {
    let p = ProblemParams::new(0.0, 1.0, 2.0, 3.0, -1.0, 1.0, 1.0, 2.0)?;
    let t = 1.0;
    for eps in [1.0, 0.1, 1e-3, 1e-6] {
        println!("ε = {eps:e}");
        for k in 0..=8 {
            let x = -2.0 + 0.75 * k as f64;
            let st = viscous_state(&p, x, t, eps)?;
            let naive = match u_eps_naive(&p, x, t, eps) {
                Ok(u) => format!("{u:+.6}"),
                Err(e) => format!("({e})"),
            };
            println!(
                "  x = {x:+.2}  u = {:+.6}  R = {:+.6}  ln V = {:+.3e}  [{}]  direct u: {naive}",
                st.u,
                st.r,
                st.v.ln_abs(),
                st.tag.label()
            );
        }
    }
    Ok(())
}
