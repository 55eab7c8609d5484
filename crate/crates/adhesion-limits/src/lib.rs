//! Exact viscous solutions and explicit vanishing-viscosity limits for the
//! one-dimensional pressureless gas system
//!
//! ```text
//! u_t + (u²/2)_x = (ε/2) u_xx,    ρ_t + (ρu)_x = (ε/2) ρ_xx,
//! u(·,0) = u_a χ(−∞,a) + u_b δ_b,  ρ(·,0) = ρ_c χ(−∞,c) + ρ_d δ_d,   a < c < b < d,
//! ```
//!
//! together with independent numerical oracles that certify every closed form.
//!
//! * [`special_fn`]: the unnormalized erfc and its scaled variants.
//! * [`problem`]: parameters, sign cases and scaled coordinates.
//! * [`viscous_exact`]: `V^ε`, `S^ε`, `u^ε`, `R^ε` in overflow-safe form.
//! * [`oracle_quadrature`]: heat-kernel quadrature and a Crank–Nicolson solver.
//! * [`limit_solution`]: wave curves and the limit fields `u`, `R`.
//! * [`measure_recovery`]: the density as a measure and weak-form checks.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod limit_solution;
pub mod measure_recovery;
pub mod oracle_quadrature;
pub mod problem;
pub mod quadrature;
pub mod special_fn;
pub mod viscous_exact;

pub use error::{Error, Result};
pub use problem::{classify_case, validate_params, CaseId, ProblemParams, SignCase, Subcase};
