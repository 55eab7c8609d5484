//! The limit density as a measure, its pairing with test functions, and the
//! weak-form checks
//!
//! ```text
//! ⟨R_x, φ⟩ = −⟨R, φ_x⟩                                     (ρ = R_x as distributions)
//! ∬ (u φ_t + (u²/2) φ_x) dx dt + u_a ∫_{−∞}^a φ(x,0) dx + u_b φ(b,0) = 0   (Burgers)
//! ```
//!
//! Both double integrals are computed zone by zone in `x` and piecewise in `t`,
//! split at every breakpoint time of the curve network, so no quadrature panel
//! straddles a kink.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit_solution::{CurveLabel, Fidelity, LimitSolution, Zone};
use crate::problem::CaseId;
use crate::quadrature::{integrate, integrate_pieces, QuadratureOptions};

/// Density `c0 + c1·x` on an interval (bounds may be infinite).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcPiece {
    pub lo: f64,
    pub hi: f64,
    pub c0: f64,
    pub c1: f64,
}

impl AcPiece {
    pub fn density(&self, x: f64) -> f64 {
        self.c0 + self.c1 * x
    }
}

/// A point mass carried by a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub x: f64,
    pub weight: f64,
    pub carrier: CurveLabel,
}

/// A measure in `x` at a fixed time: absolutely continuous pieces plus atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure1D {
    pub t: f64,
    pub ac: Vec<AcPiece>,
    pub atoms: Vec<Atom>,
}

impl Measure1D {
    pub fn zero(t: f64) -> Self {
        Measure1D { t, ac: Vec::new(), atoms: Vec::new() }
    }

    /// Sum of absolute atom weights.
    pub fn atomic_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.abs()).sum()
    }

    /// `α·self + β·other` (pieces and atoms concatenated).
    pub fn combine(&self, alpha: f64, other: &Measure1D, beta: f64) -> Measure1D {
        let scale_ac = |p: &AcPiece, k: f64| AcPiece { c0: k * p.c0, c1: k * p.c1, ..*p };
        let scale_atom = |a: &Atom, k: f64| Atom { weight: k * a.weight, ..*a };
        Measure1D {
            t: self.t,
            ac: self.ac.iter().map(|p| scale_ac(p, alpha)).chain(other.ac.iter().map(|p| scale_ac(p, beta))).collect(),
            atoms: self
                .atoms
                .iter()
                .map(|a| scale_atom(a, alpha))
                .chain(other.atoms.iter().map(|a| scale_atom(a, beta)))
                .collect(),
        }
    }
}

/// Relative distance below which two zone edges are treated as one atom location.
const MERGE_TOL: f64 = 1e-12;

/// The limit density at time `t > 0`.
///
/// Under [`Fidelity::Corrected`] (and for Cases 2 and 3 under every fidelity) the
/// absolutely continuous part is `∂R/∂x` zone by zone and every zone edge carries
/// an atom whose weight is the jump of `R` across it. Under the printed fidelities,
/// Cases 1 and 4 use the printed density, including the printed atom weights in Case 4.
pub fn rho_measure(sol: &LimitSolution, t: f64) -> Result<Measure1D> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("rho_measure needs t > 0, got {t}")));
    }
    if sol.case.case_id == CaseId::Case4 && sol.fidelity != Fidelity::Corrected {
        return Ok(case4_printed(sol, t));
    }
    Ok(from_jumps(sol, t))
}

fn edge_carrier(sol: &LimitSolution, i: usize) -> CurveLabel {
    sol.curves.edges[i].label
}

fn from_jumps(sol: &LimitSolution, t: f64) -> Measure1D {
    let e = sol.layout(t);
    let mut m = Measure1D::zero(t);
    for (zone, lo, hi) in sol.zones_in(t, (f64::NEG_INFINITY, f64::INFINITY)) {
        // Densities are linear in x; recover the two coefficients exactly.
        let (c0, c1) = match zone {
            Zone::FanA if sol.fidelity != Fidelity::Corrected => {
                let d0 = sol.zone_density(zone, 0.0, t);
                let d1 = sol.zone_density(zone, 1.0, t);
                (d0, d1 - d0)
            }
            _ => (sol.zone_density(zone, 0.0, t), 0.0),
        };
        if c0 != 0.0 || c1 != 0.0 {
            m.ac.push(AcPiece { lo, hi, c0, c1 });
        }
    }
    // Jumps of R at each distinct edge location.
    let mut i = 0;
    while i < 6 {
        let mut j = i;
        while j + 1 < 6 && (e[j + 1] - e[i]).abs() <= MERGE_TOL * e[i].abs().max(1.0) {
            j += 1;
        }
        let x = e[i];
        let left = sol.zone_r(Zone::ALL[i], x, t);
        let right = sol.zone_r(Zone::ALL[j + 1], x, t);
        let weight = right - left;
        if weight != 0.0 {
            m.atoms.push(Atom { x, weight, carrier: edge_carrier(sol, i) });
        }
        i = j + 1;
    }
    m
}

/// Printed Case-4 density with its two atoms on `γ_{a,1}` and `γ_{a,2}`.
fn case4_printed(sol: &LimitSolution, t: f64) -> Measure1D {
    let p = &sol.params;
    let e = sol.layout(t);
    let (x1, x2, gc) = (e[0], e[1], e[2]);
    let uat = p.u_a * t;
    let bare = if sol.fidelity == Fidelity::AsPrinted { 2.0 } else { 0.0 };
    let w1 = 2.0 * (p.c - p.a) + uat + gc - x1 - bare - 2.0 * (x1 - p.a).powi(2) / uat;
    let w2 = 2.0 * (x2 - p.a) + p.c - gc - bare - 2.0 * (x2 - p.a).powi(2) / uat;
    let mut m = Measure1D::zero(t);
    m.ac.push(AcPiece { lo: f64::NEG_INFINITY, hi: x1, c0: p.rho_c, c1: 0.0 });
    if x2 > x1 {
        m.ac.push(AcPiece { lo: x1, hi: x2, c0: p.rho_c * (-4.0 * p.a / uat - 2.0), c1: p.rho_c * 4.0 / uat });
    }
    if gc > x2 {
        m.ac.push(AcPiece { lo: x2, hi: gc, c0: p.rho_c, c1: 0.0 });
    }
    m.atoms.push(Atom { x: x1, weight: p.rho_c * w1, carrier: CurveLabel::GammaA1 });
    m.atoms.push(Atom { x: x2, weight: p.rho_c * w2, carrier: CurveLabel::GammaA2 });
    m.atoms.push(Atom { x: e[5], weight: p.rho_d, carrier: CurveLabel::GammaD });
    m
}

/// Smooth bump `φ(x,t) = e²·ψ((x−x0)/wx)·ψ((t−t0)/wt)` with `ψ(s) = exp(−1/(1−s²))` on `|s| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunction {
    pub x0: f64,
    pub t0: f64,
    pub wx: f64,
    pub wt: f64,
}

fn psi(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

fn dpsi(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - s * s;
        psi(s) * (-2.0 * s / (q * q))
    }
}

impl TestFunction {
    pub fn new(x0: f64, t0: f64, wx: f64, wt: f64) -> Self {
        TestFunction { x0, t0, wx, wt }
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        psi((x - self.x0) / self.wx) * psi((t - self.t0) / self.wt)
    }

    pub fn dx(&self, x: f64, t: f64) -> f64 {
        dpsi((x - self.x0) / self.wx) / self.wx * psi((t - self.t0) / self.wt)
    }

    pub fn dt(&self, x: f64, t: f64) -> f64 {
        psi((x - self.x0) / self.wx) * dpsi((t - self.t0) / self.wt) / self.wt
    }

    pub fn x_support(&self) -> (f64, f64) {
        (self.x0 - self.wx, self.x0 + self.wx)
    }

    /// Support in `t`, cut at `t = 0`.
    pub fn t_support(&self) -> (f64, f64) {
        ((self.t0 - self.wt).max(0.0), self.t0 + self.wt)
    }

    pub fn touches_initial_line(&self) -> bool {
        self.t0 - self.wt < 0.0
    }

    pub fn descriptor(&self) -> String {
        format!("bump(x0={}, t0={}, wx={}, wt={})", self.x0, self.t0, self.wx, self.wt)
    }
}

fn inner_opts() -> QuadratureOptions {
    QuadratureOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_subdivisions: 400 }
}

fn outer_opts(abs_tol: f64) -> QuadratureOptions {
    QuadratureOptions { abs_tol, rel_tol: 1e-10, max_subdivisions: 400 }
}

/// `⟨m, φ(·, t)⟩`: adaptive quadrature of each density piece plus the atoms.
pub fn pair_measure(m: &Measure1D, phi: &TestFunction, t: f64) -> Result<f64> {
    let (lo, hi) = phi.x_support();
    let mut total = 0.0;
    for piece in &m.ac {
        let (a, b) = (piece.lo.max(lo), piece.hi.min(hi));
        if b > a {
            total += integrate(|x| piece.density(x) * phi.value(x, t), a, b, QuadratureOptions::new(1e-14, 1e-10))?.value;
        }
    }
    total += m.atoms.iter().map(|a| a.weight * phi.value(a.x, t)).sum::<f64>();
    Ok(total)
}

/// Outcome of one weak-form check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakCheckReport {
    pub case: &'static str,
    pub subcase: &'static str,
    pub check: String,
    pub phi_descriptor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

fn check_name(base: &str, fidelity: Fidelity) -> String {
    match fidelity {
        Fidelity::Corrected => base.to_string(),
        other => format!("{base}/{}", other.as_str()),
    }
}

/// `Σ_zones ∫ g(zone, x) dx` over the zones at time `t` intersected with `[lo, hi]`.
fn zone_integral<G: Fn(Zone, f64) -> f64>(sol: &LimitSolution, t: f64, lo: f64, hi: f64, g: G) -> Result<f64> {
    let mut total = 0.0;
    for (zone, a, b) in sol.zones_in(t, (lo, hi)) {
        total += integrate(|x| g(zone, x), a, b, inner_opts())?.value;
    }
    Ok(total)
}

/// Records the first error raised inside an integrand that must return `f64`.
#[derive(Default)]
struct FirstError(std::cell::RefCell<Option<Error>>);

impl FirstError {
    fn catch(&self, r: Result<f64>) -> f64 {
        r.unwrap_or_else(|e| {
            self.0.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    }

    /// The recorded inner error takes precedence over the outer result.
    fn finish(self, outer: Result<f64>) -> Result<f64> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => outer,
        }
    }
}

fn time_breakpoints(sol: &LimitSolution, lo: f64, hi: f64) -> Vec<f64> {
    sol.curves.breakpoint_times().into_iter().filter(|&t| t > lo && t < hi).collect()
}

/// Checks `−∬ R φ_x dx dt = ∫ ⟨ρ(t), φ(·,t)⟩ dt` for a bump supported in `t > 0`.
///
/// Passes iff `|lhs − rhs| ≤ tol·(1 + |rhs|)`.
pub fn check_distributional_derivative(sol: &LimitSolution, phi: &TestFunction, tol: f64) -> Result<WeakCheckReport> {
    if phi.touches_initial_line() || phi.t0 - phi.wt <= 0.0 {
        return Err(Error::Domain(format!("{} must be supported in t > 0", phi.descriptor())));
    }
    let (xl, xh) = phi.x_support();
    let (tl, th) = phi.t_support();
    let cuts = time_breakpoints(sol, tl, th);
    let abs = 1e-13;
    let inner = FirstError::default();
    let outer = integrate_pieces(
        |t| inner.catch(zone_integral(sol, t, xl, xh, |z, x| sol.zone_r(z, x, t) * phi.dx(x, t))),
        tl,
        th,
        &cuts,
        outer_opts(abs),
    )
    .map(|r| r.value);
    let lhs = -inner.finish(outer)?;
    let inner = FirstError::default();
    let outer = integrate_pieces(
        |t| inner.catch(rho_measure(sol, t).and_then(|m| pair_measure(&m, phi, t))),
        tl,
        th,
        &cuts,
        outer_opts(abs),
    )
    .map(|r| r.value);
    let rhs = inner.finish(outer)?;
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::Quadrature { estimate: f64::NAN, tolerance: tol, subdivisions: 0 });
    }
    let residual = lhs - rhs;
    Ok(WeakCheckReport {
        case: sol.case.case_id.as_str(),
        subcase: sol.case.subcase.as_str(),
        check: check_name("distributional-derivative", sol.fidelity),
        phi_descriptor: phi.descriptor(),
        lhs,
        rhs,
        residual,
        tol,
        pass: residual.abs() <= tol * (1.0 + rhs.abs()),
    })
}

/// Integrates `F(t)` over the bump's time support, substituting `t = τ²` when the
/// support reaches `t = 0` (the square-root curves make `F` behave like powers of `√t` there).
fn integrate_time<F: Fn(f64) -> Result<f64>>(sol: &LimitSolution, phi: &TestFunction, f: F, abs_tol: f64) -> Result<f64> {
    let (tl, th) = phi.t_support();
    let cuts = time_breakpoints(sol, tl, th);
    let inner = FirstError::default();
    let outer = if tl > 0.0 {
        integrate_pieces(|t| inner.catch(f(t)), tl, th, &cuts, outer_opts(abs_tol))
    } else {
        let cuts: Vec<f64> = cuts.iter().map(|t| t.sqrt()).collect();
        integrate_pieces(|tau| 2.0 * tau * inner.catch(f(tau * tau)), 0.0, th.sqrt(), &cuts, outer_opts(abs_tol))
    };
    inner.finish(outer.map(|r| r.value))
}

/// Burgers weak-form residual for the limit velocity.
///
/// `lhs = ∬ (u φ_t + (u²/2) φ_x) dx dt`, `rhs = −(u_a ∫_{−∞}^a φ(x,0) dx + u_b φ(b,0))`,
/// `residual = lhs − rhs`. Passes iff `|residual| ≤ tol·scale(φ)`, where `scale(φ)` is
/// the same expression with every term replaced by its absolute value.
pub fn burgers_weak_residual(sol: &LimitSolution, phi: &TestFunction, tol: f64) -> Result<WeakCheckReport> {
    let p = &sol.params;
    let (xl, xh) = phi.x_support();
    let flux = |z: Zone, x: f64, t: f64| {
        let u = sol.zone_u(z, x, t);
        (u * phi.dt(x, t), 0.5 * u * u * phi.dx(x, t))
    };
    let lhs = integrate_time(
        sol,
        phi,
        |t| {
            zone_integral(sol, t, xl, xh, |z, x| {
                let (a, b) = flux(z, x, t);
                a + b
            })
        },
        1e-13,
    )?;
    let abs_part = integrate_time(
        sol,
        phi,
        |t| {
            zone_integral(sol, t, xl, xh, |z, x| {
                let (a, b) = flux(z, x, t);
                a.abs() + b.abs()
            })
        },
        1e-13,
    )?;
    let (mut initial, mut initial_abs) = (0.0, 0.0);
    if phi.touches_initial_line() {
        let hi = p.a.min(xh);
        if hi > xl {
            let r = integrate(|x| phi.value(x, 0.0), xl, hi, QuadratureOptions::new(1e-15, 1e-12))?;
            initial += p.u_a * r.value;
            initial_abs += p.u_a.abs() * r.abs_value;
        }
        let at_b = p.u_b * phi.value(p.b, 0.0);
        initial += at_b;
        initial_abs += at_b.abs();
    }
    if !lhs.is_finite() || !abs_part.is_finite() {
        return Err(Error::Quadrature { estimate: f64::NAN, tolerance: tol, subdivisions: 0 });
    }
    let rhs = -initial;
    let residual = lhs - rhs;
    let scale = abs_part + initial_abs;
    Ok(WeakCheckReport {
        case: sol.case.case_id.as_str(),
        subcase: sol.case.subcase.as_str(),
        check: check_name("burgers-weak-residual", sol.fidelity),
        phi_descriptor: phi.descriptor(),
        lhs,
        rhs,
        residual,
        tol,
        pass: residual.abs() <= tol * scale,
    })
}

/// Anchors for randomized bumps: points on every named curve and edge, and the
/// meeting points at every breakpoint time up to `t_max`.
fn anchors(sol: &LimitSolution, rng: &mut ChaCha8Rng, t_max: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for t in sol.curves.breakpoint_times() {
        if t <= t_max {
            for edge in &sol.curves.edges {
                let x = edge.eval(t);
                if !out.iter().any(|&(ox, ot): &(f64, f64)| (ox - x).abs() < 1e-9 && (ot - t).abs() < 1e-9) {
                    out.push((x, t));
                }
            }
        }
    }
    for c in sol.curves.curves.iter().chain(sol.curves.edges.iter()) {
        let t = rng.gen_range(0.4..3.0);
        out.push((c.eval(t), t));
    }
    out
}

/// `n` bumps supported in `t > 0`, cycling over curve and breakpoint anchors with
/// random jitter and widths (seeded, hence reproducible).
pub fn interior_bumps(sol: &LimitSolution, n: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut list = anchors(sol, &mut rng, 40.0);
    // Breakpoint anchors first, then curve anchors, shuffled within the cycle.
    let mut out = Vec::with_capacity(n);
    if list.is_empty() {
        list.push((0.5 * (sol.params.a + sol.params.d), 1.0));
    }
    for i in 0..n {
        let (x, t) = list[(i * 7 + i / list.len()) % list.len()];
        let wx = rng.gen_range(0.3..1.2);
        let mut wt = rng.gen_range(0.2..0.8);
        let t0 = (t + rng.gen_range(-0.3..0.3) * wt).max(0.15);
        if t0 - wt < 0.05 {
            wt = 0.8 * t0;
        }
        let x0 = x + rng.gen_range(-0.3..0.3) * wx;
        out.push(TestFunction::new(x0, t0, wx, wt));
    }
    out
}

/// `n` bumps for the Burgers check: a quarter of them touch `t = 0` near `a` or
/// `b`; the rest are [`interior_bumps`].
pub fn burgers_bumps(sol: &LimitSolution, n: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n_initial = n.div_ceil(4);
    let mut out = Vec::with_capacity(n);
    let p = &sol.params;
    for i in 0..n_initial {
        let foot = if i % 2 == 0 { p.b } else { p.a };
        let wx = rng.gen_range(0.4..1.5);
        let wt = rng.gen_range(0.4..1.0);
        let t0 = rng.gen_range(0.0..0.5) * wt;
        out.push(TestFunction::new(foot + rng.gen_range(-0.5..0.5) * wx, t0, wx, wt));
    }
    out.extend(interior_bumps(sol, n - n_initial, seed));
    out
}
