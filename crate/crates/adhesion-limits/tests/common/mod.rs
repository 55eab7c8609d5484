//! Shared fixtures: parameter sets and an independent variational oracle for the
//! limit fields.

#![allow(dead_code)]

use adhesion_limits::ProblemParams;

/// `(a, c, b, d) = (0, 1, 2, 3)`, `ρ_c = 1`, `ρ_d = 2` with the given velocities.
pub fn base(u_a: f64, u_b: f64) -> ProblemParams {
    ProblemParams::new(0.0, 1.0, 2.0, 3.0, u_a, u_b, 1.0, 2.0).expect("valid parameters")
}

/// One canonical parameter set per sign case, `|u| = 1`.
pub fn canonical() -> Vec<(&'static str, ProblemParams)> {
    vec![
        ("case1", base(-1.0, 1.0)),
        ("case2", base(1.0, 1.0)),
        ("case3", base(1.0, -1.0)),
        ("case4", base(-1.0, -1.0)),
    ]
}

/// Canonical sets plus one representative of every remaining subcase.
pub fn all_subcases() -> Vec<(&'static str, ProblemParams)> {
    let mut v = canonical();
    v.extend([
        ("case2-strong", base(1.0, 0.5)),
        ("case2-weak", base(1.0, 3.0)),
        ("case3-large", base(1.0, -3.0)),
        ("case4-above", base(-1.0, -3.0)),
    ]);
    v
}

/// Limit state from the Hopf–Lax minimization of `(x−y)²/(2t) + U₀(y)`, where
/// `U₀` is the potential of the initial velocity (`u_a(y−a)` left of `a`, zero on
/// `(a, b)`, `u_b` right of `b`). The limit `R` is `R₀(y*)` with `R₀` the potential
/// of the initial density.
#[derive(Debug, Clone, Copy)]
pub struct Variational {
    pub u: f64,
    pub r: f64,
    /// Cost difference between the two best candidates; small values flag a shock.
    pub gap: f64,
}

pub fn variational(p: &ProblemParams, x: f64, t: f64) -> Variational {
    let r0 = |y: f64| {
        if y < p.c {
            p.rho_c * (y - p.c)
        } else if y < p.d {
            0.0
        } else {
            p.rho_d
        }
    };
    let mut cands: Vec<(f64, f64)> = Vec::new();
    if x - p.u_a * t < p.a {
        cands.push((p.u_a * (x - p.a) - 0.5 * p.u_a * p.u_a * t, x - p.u_a * t));
    }
    let ym = x.clamp(p.a, p.b);
    cands.push(((x - ym).powi(2) / (2.0 * t), ym));
    let yr = x.max(p.b);
    cands.push(((x - yr).powi(2) / (2.0 * t) + p.u_b, yr));
    cands.sort_by(|l, r| l.0.total_cmp(&r.0));
    let (_, y) = cands[0];
    let gap = if cands.len() > 1 { cands[1].0 - cands[0].0 } else { f64::INFINITY };
    Variational { u: (x - y) / t, r: r0(y), gap }
}

/// Relative difference `|x − y| / max(1, |y|)`.
pub fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}
