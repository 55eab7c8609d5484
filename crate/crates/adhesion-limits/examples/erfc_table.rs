//! Paper-convention erfc, its scaled form and the bounded ratio `f(z) = z·erfc_scaled(z)`.
//!
//! Run with `cargo run --example erfc_table`.

use adhesion_limits::special_fn::{erfc_paper, erfc_scaled, erfc_scaled_two_term, f_stable, two_term_remainder_bound};

fn main() -> adhesion_limits::Result<()> {
    println!("{:>8} {:>24} {:>24} {:>12} {:>12}", "z", "erfc(z)", "erfc_scaled(z)", "f(z)", "2-term err");
    for z in [-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0, 10.0, 30.0, 100.0] {
        let two_term = if z >= 2.0 {
            format!("{:.1e}", (erfc_scaled(z)? - erfc_scaled_two_term(z)).abs())
        } else {
            "-".into()
        };
        println!(
            "{z:>8} {:>24.17e} {:>24.17e} {:>12.9} {two_term:>12}",
            erfc_paper(z)?,
            erfc_scaled(z)?,
            f_stable(z)?
        );
    }
    // Plain erfc underflows long before the scaled form loses accuracy.
    println!("erfc(40) = {:e}, erfc_scaled(40) = {:e}", erfc_paper(40.0)?, erfc_scaled(40.0)?);
    println!("remainder bound at z = 10: {:e}", two_term_remainder_bound(10.0));
    Ok(())
}
