//! Independent numerical oracles for the viscous solutions.
//!
//! * [`v_quad`] and [`s_quad`] integrate the raw initial data against the heat
//!   kernel `G(x−y, t) = e^{−(x−y)²/(2tε)}/√(2πtε)`. After completing the square
//!   each piece becomes a moment `∫ zᵏ e^{−z²} dz` over an interval; these are
//!   integrated numerically (never through the erfc closed forms), with half-lines
//!   mapped to a bounded range by a tangent substitution.
//! * [`heat_fd_solve`] solves `V_t = (ε/2)V_xx` and `S_t = (ε/2)S_xx` with a
//!   Crank–Nicolson scheme started by two implicit Euler half steps.

use crate::error::{Error, Result};
use crate::problem::{check_time_eps, ProblemParams};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::viscous_exact::Scaled;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// A scaled oracle value with its error estimate and absolute magnitude.
///
/// `abs_error` and `magnitude` are expressed in the same units as `value`, i.e.
/// as multiples of `exp(value.log_scale)` when converted through [`Scaled`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Scaled,
    /// Estimated absolute error.
    pub abs_error: Scaled,
    /// Sum of absolute values of all contributions (cancellation scale).
    pub magnitude: Scaled,
    pub subdivisions: usize,
}

impl OracleValue {
    fn zero() -> Self {
        OracleValue { value: Scaled::ZERO, abs_error: Scaled::ZERO, magnitude: Scaled::ZERO, subdivisions: 0 }
    }

    fn add_term(&mut self, coef: f64, log_factor: f64, m: &Moment) {
        let f = |v: f64| Scaled { mantissa: coef * v, log_scale: log_factor + m.log_scale };
        self.value = self.value.plus(f(m.value));
        self.abs_error = self.abs_error.plus(f(m.abs_error).scale(coef.signum()));
        self.magnitude = self.magnitude.plus(f(m.value.abs()).scale(coef.signum()));
        self.subdivisions += m.subdivisions;
    }
}

/// `∫_lo^hi zᵏ e^{−z²} dz = value · e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moment {
    pub value: f64,
    pub log_scale: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

/// Numerical Gaussian moment `∫_lo^hi zᵏ e^{−z²} dz` for `k ∈ {0, 1}`.
///
/// Bounds may be infinite. The interval is split at `z = 0`; each half is
/// rewritten as `e^{−p²} ∫_0^{q−p} (p+τ)ᵏ e^{−2pτ−τ²} dτ` with `0 ≤ p < q ≤ ∞` and
/// integrated in `θ ∈ [0, 1)` through `τ = L·tan(πθ/2)`, `L = 1/(1+2p)`.
pub fn gaussian_moment(k: u32, lo: f64, hi: f64, rel_tol: f64) -> Result<Moment> {
    if k > 1 {
        return Err(Error::Domain(format!("gaussian_moment supports k = 0 or 1, got {k}")));
    }
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::Domain("gaussian_moment bounds are NaN".into()));
    }
    if lo >= hi {
        if lo == hi {
            return Ok(Moment { value: 0.0, log_scale: 0.0, abs_error: 0.0, subdivisions: 0 });
        }
        let m = gaussian_moment(k, hi, lo, rel_tol)?;
        return Ok(Moment { value: -m.value, ..m });
    }
    // Pieces on the nonnegative half-line, with the sign picked up by mirroring.
    let mut pieces: Vec<(f64, f64, f64)> = Vec::new();
    if hi <= 0.0 {
        pieces.push((-hi, -lo, if k == 1 { -1.0 } else { 1.0 }));
    } else if lo >= 0.0 {
        pieces.push((lo, hi, 1.0));
    } else {
        pieces.push((0.0, -lo, if k == 1 { -1.0 } else { 1.0 }));
        pieces.push((0.0, hi, 1.0));
    }
    let mut total = Scaled::ZERO;
    let mut err = Scaled::ZERO;
    let mut subdivisions = 0;
    for (p, q, sign) in pieces {
        let l = 1.0 / (1.0 + 2.0 * p);
        let theta_max = if q.is_infinite() { 1.0 } else { std::f64::consts::FRAC_2_PI * ((q - p) / l).atan() };
        let half_pi = std::f64::consts::FRAC_PI_2;
        let integrand = |theta: f64| {
            let tau = l * (half_pi * theta).tan();
            let c = (half_pi * theta).cos();
            let jac = l * half_pi / (c * c);
            let g = (-(2.0 * p + tau) * tau).exp();
            let poly = if k == 0 { 1.0 } else { p + tau };
            if g == 0.0 {
                0.0
            } else {
                poly * g * jac
            }
        };
        let r = integrate(integrand, 0.0, theta_max, QuadratureOptions { abs_tol: 0.0, rel_tol, max_subdivisions: 500 })?;
        let s = Scaled { mantissa: sign * r.value, log_scale: -p * p };
        total = total.plus(s);
        err = err.plus(Scaled { mantissa: r.abs_error_estimate, log_scale: -p * p });
        subdivisions += r.subdivisions;
    }
    let abs_error = if total.mantissa == 0.0 { err.mantissa } else { err.ratio(total).unwrap_or(0.0) * total.mantissa.abs() };
    Ok(Moment { value: total.mantissa, log_scale: total.log_scale, abs_error, subdivisions })
}

/// Completing-the-square offset `(T² − 2T(x−a))/(2tε)` with `T = u_a t`.
fn tilt_offset(p: &ProblemParams, x: f64, t: f64, eps: f64) -> f64 {
    let tt = p.u_a * t;
    (tt * tt - 2.0 * tt * (x - p.a)) / (2.0 * t * eps)
}

/// `V^ε(x, t)` by quadrature of the heat kernel against `e^{−U₀/ε}`.
///
/// `rel_tol` applies to each Gaussian moment; the result carries the summed
/// error estimate.
pub fn v_quad(p: &ProblemParams, x: f64, t: f64, eps: f64, rel_tol: f64) -> Result<OracleValue> {
    check_time_eps(t, eps)?;
    let s = (2.0 * t * eps).sqrt();
    let mut out = OracleValue::zero();
    // y < a: z = (y − x + u_a t)/s runs over (−∞, (a − x + u_a t)/s).
    let m = gaussian_moment(0, f64::NEG_INFINITY, (p.a - x + p.u_a * t) / s, rel_tol)?;
    out.add_term(1.0 / SQRT_PI, tilt_offset(p, x, t, eps), &m);
    // a < y < b: z = (y − x)/s.
    let m = gaussian_moment(0, (p.a - x) / s, (p.b - x) / s, rel_tol)?;
    out.add_term(1.0 / SQRT_PI, 0.0, &m);
    // y > b, weighted by e^{−u_b/ε}.
    let m = gaussian_moment(0, (p.b - x) / s, f64::INFINITY, rel_tol)?;
    out.add_term(1.0 / SQRT_PI, -p.u_b / eps, &m);
    Ok(out)
}

/// `S^ε(x, t)` by quadrature of the heat kernel against `R₀·e^{−U₀/ε}`.
///
/// The linear factor `y − c` is split as `(x − c − u_a t) + s·z` (resp.
/// `(x − c) + s·z`), giving a zeroth and a first Gaussian moment.
pub fn s_quad(p: &ProblemParams, x: f64, t: f64, eps: f64, rel_tol: f64) -> Result<OracleValue> {
    check_time_eps(t, eps)?;
    let s = (2.0 * t * eps).sqrt();
    let mut out = OracleValue::zero();
    if p.rho_c != 0.0 {
        let hi = (p.a - x + p.u_a * t) / s;
        let tilt = tilt_offset(p, x, t, eps);
        let m0 = gaussian_moment(0, f64::NEG_INFINITY, hi, rel_tol)?;
        let m1 = gaussian_moment(1, f64::NEG_INFINITY, hi, rel_tol)?;
        out.add_term(p.rho_c * (x - p.c - p.u_a * t) / SQRT_PI, tilt, &m0);
        out.add_term(p.rho_c * s / SQRT_PI, tilt, &m1);
        let (lo, hi) = ((p.a - x) / s, (p.c - x) / s);
        let m0 = gaussian_moment(0, lo, hi, rel_tol)?;
        let m1 = gaussian_moment(1, lo, hi, rel_tol)?;
        out.add_term(p.rho_c * (x - p.c) / SQRT_PI, 0.0, &m0);
        out.add_term(p.rho_c * s / SQRT_PI, 0.0, &m1);
    }
    if p.rho_d != 0.0 {
        let m = gaussian_moment(0, (p.d - x) / s, f64::INFINITY, rel_tol)?;
        out.add_term(p.rho_d / SQRT_PI, -p.u_b / eps, &m);
    }
    Ok(out)
}

/// Initial datum `V(x, 0) = e^{−U₀(x)/ε}`; the midpoint value is used at the jump `x = b`.
pub fn initial_v(p: &ProblemParams, eps: f64, x: f64) -> f64 {
    let right = (-p.u_b / eps).exp();
    if x < p.a {
        (-p.u_a * (x - p.a) / eps).exp()
    } else if x < p.b {
        1.0
    } else if x == p.b {
        0.5 * (1.0 + right)
    } else {
        right
    }
}

/// Initial datum `S(x, 0) = R₀(x)·e^{−U₀(x)/ε}`; the midpoint value is used at `x = d`.
pub fn initial_s(p: &ProblemParams, eps: f64, x: f64) -> f64 {
    let right = p.rho_d * (-p.u_b / eps).exp();
    if x < p.a {
        p.rho_c * (x - p.c) * (-p.u_a * (x - p.a) / eps).exp()
    } else if x < p.c {
        p.rho_c * (x - p.c)
    } else if x < p.d {
        0.0
    } else if x == p.d {
        0.5 * right
    } else {
        right
    }
}

/// How the end nodes of the finite-difference grid evolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryRule {
    /// End values stay at their initial values (Dirichlet).
    Frozen,
    /// A ghost node beyond each end holds the boundary value times the ratio of
    /// the first two initial samples, which is exact for exponential far fields
    /// `e^{kx}` and reduces to a reflecting boundary for constant data.
    RatioExtrapolation,
}

/// Uniform grid for [`heat_fd_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub dt: f64,
    pub boundary: BoundaryRule,
}

impl FDGrid {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    /// Crank–Nicolson is unconditionally stable; this is the mesh ratio
    /// `ε·dt/(2dx²)`, recorded for reference (values above 1 lose monotonicity).
    pub fn mesh_ratio(&self, eps: f64) -> f64 {
        eps * self.dt / (2.0 * self.dx() * self.dx())
    }

    /// Checks that the Gaussian tail reaching `x_probe` from either end by time
    /// `t` is below `1e-10`, i.e. the truncated domain does not influence the probe.
    pub fn check_truncation(&self, x_probe: f64, t: f64, eps: f64) -> Result<()> {
        let dist = (x_probe - self.x_min).min(self.x_max - x_probe);
        let z = dist / (2.0 * t * eps).sqrt();
        if dist <= 0.0 || libm::erfc(z) > 1e-10 {
            return Err(Error::FiniteDifference(format!(
                "probe {x_probe} is too close to the domain ends [{}, {}] for t = {t}, eps = {eps}",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }
}

/// Fields returned by [`heat_fd_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct FdFields {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub s: Vec<f64>,
    pub t: f64,
    pub steps: usize,
}

impl FdFields {
    /// Value of `v` at the node closest to `x` (exact when `x` is a node).
    pub fn v_at(&self, x: f64) -> f64 {
        self.v[self.nearest(x)]
    }

    pub fn s_at(&self, x: f64) -> f64 {
        self.s[self.nearest(x)]
    }

    fn nearest(&self, x: f64) -> usize {
        let dx = self.x[1] - self.x[0];
        let i = ((x - self.x[0]) / dx).round();
        (i.max(0.0) as usize).min(self.x.len() - 1)
    }
}

/// Solves the two heat equations from sampled initial data up to `t_end`.
pub fn heat_fd_solve(v0: &[f64], s0: &[f64], eps: f64, grid: &FDGrid, t_end: f64) -> Result<FdFields> {
    if grid.nx < 3 {
        return Err(Error::FiniteDifference(format!("grid needs at least 3 nodes, got {}", grid.nx)));
    }
    if v0.len() != grid.nx || s0.len() != grid.nx {
        return Err(Error::FiniteDifference("initial samples do not match the grid size".into()));
    }
    if !(grid.dt > 0.0 && grid.x_max > grid.x_min && eps > 0.0 && t_end >= 0.0) {
        return Err(Error::FiniteDifference("grid spacing, time step, epsilon and t_end must be positive".into()));
    }
    let steps = (t_end / grid.dt).ceil() as usize;
    let v = solve_heat(v0, eps, grid, t_end, steps)?;
    let s = solve_heat(s0, eps, grid, t_end, steps)?;
    Ok(FdFields { x: grid.nodes(), v, s, t: t_end, steps })
}

fn ghost_ratio(first: f64, second: f64) -> f64 {
    if first == 0.0 || second == 0.0 {
        1.0
    } else {
        first / second
    }
}

fn solve_heat(u0: &[f64], eps: f64, grid: &FDGrid, t_end: f64, steps: usize) -> Result<Vec<f64>> {
    let n = grid.nx;
    let mut u = u0.to_vec();
    if steps == 0 {
        return Ok(u);
    }
    let dt = t_end / steps as f64;
    let dx = grid.dx();
    let (kl, kr) = match grid.boundary {
        BoundaryRule::Frozen => (None, None),
        BoundaryRule::RatioExtrapolation => {
            (Some(ghost_ratio(u0[0], u0[1])), Some(ghost_ratio(u0[n - 1], u0[n - 2])))
        }
    };
    let apply = |u: &[f64], out: &mut [f64]| {
        let c = eps / (2.0 * dx * dx);
        for i in 1..n - 1 {
            out[i] = c * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
        }
        out[0] = kl.map_or(0.0, |k| c * ((k - 2.0) * u[0] + u[1]));
        out[n - 1] = kr.map_or(0.0, |k| c * (u[n - 2] + (k - 2.0) * u[n - 1]));
    };
    // Theta-scheme step: (I − θ h A) u⁺ = (I + (1−θ) h A) u.
    let step = |u: &mut Vec<f64>, h: f64, theta: f64| {
        let c = eps / (2.0 * dx * dx);
        let mut au = vec![0.0; n];
        apply(u, &mut au);
        let rhs: Vec<f64> = (0..n).map(|i| u[i] + (1.0 - theta) * h * au[i]).collect();
        let mut lower = vec![-theta * h * c; n];
        let mut diag = vec![1.0 + 2.0 * theta * h * c; n];
        let mut upper = vec![-theta * h * c; n];
        match kl {
            Some(k) => diag[0] = 1.0 - theta * h * c * (k - 2.0),
            None => {
                diag[0] = 1.0;
                upper[0] = 0.0;
            }
        }
        match kr {
            Some(k) => diag[n - 1] = 1.0 - theta * h * c * (k - 2.0),
            None => {
                diag[n - 1] = 1.0;
                lower[n - 1] = 0.0;
            }
        }
        lower[0] = 0.0;
        upper[n - 1] = 0.0;
        *u = thomas(&lower, &diag, &upper, &rhs);
    };
    // Rannacher start: two implicit Euler half steps damp the jump modes.
    step(&mut u, 0.5 * dt, 1.0);
    step(&mut u, 0.5 * dt, 1.0);
    for _ in 1..steps {
        step(&mut u, dt, 0.5);
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::FiniteDifference("solution became non-finite".into()));
    }
    Ok(u)
}

/// Tridiagonal solve (Thomas algorithm); `lower[0]` and `upper[n−1]` are ignored.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Grid covering `[a − margin, d + margin]` with spacing `dx`, aligned so that
/// `x = b` is a node, and time step equal to `dx`.
pub fn aligned_grid(p: &ProblemParams, margin: f64, dx: f64, boundary: BoundaryRule) -> FDGrid {
    let left = ((p.b - (p.a - margin)) / dx).ceil();
    let right = (((p.d + margin) - p.b) / dx).ceil();
    FDGrid {
        x_min: p.b - left * dx,
        x_max: p.b + right * dx,
        nx: (left + right) as usize + 1,
        dt: dx,
        boundary,
    }
}

/// Richardson study of the finite-difference `V` at probe points.
#[derive(Debug, Clone, PartialEq)]
pub struct RichardsonReport {
    pub x: f64,
    pub t: f64,
    /// Values on grids with spacing `h`, `h/2`, `h/4`.
    pub levels: [f64; 3],
    /// `V(h/4) + (V(h/4) − V(h/2))/3`.
    pub extrapolated: f64,
    /// `log₂((V(h) − V(h/2)) / (V(h/2) − V(h/4)))`.
    pub observed_order: f64,
}

/// Runs the finite-difference solver for `V` on three nested grids and
/// extrapolates the values at the probes.
pub fn richardson_v(p: &ProblemParams, eps: f64, t: f64, probes: &[f64], h: f64, margin: f64) -> Result<Vec<RichardsonReport>> {
    let mut levels: Vec<Vec<f64>> = Vec::new();
    for k in 0..3 {
        let dx = h / f64::powi(2.0, k);
        let grid = aligned_grid(p, margin, dx, BoundaryRule::RatioExtrapolation);
        for &x in probes {
            grid.check_truncation(x, t, eps)?;
        }
        let nodes = grid.nodes();
        let v0: Vec<f64> = nodes.iter().map(|&x| initial_v(p, eps, snap(x, p))).collect();
        let s0 = vec![0.0; nodes.len()];
        let f = heat_fd_solve(&v0, &s0, eps, &grid, t)?;
        levels.push(probes.iter().map(|&x| f.v_at(x)).collect());
    }
    Ok(probes
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let l = [levels[0][i], levels[1][i], levels[2][i]];
            RichardsonReport {
                x,
                t,
                levels: l,
                extrapolated: l[2] + (l[2] - l[1]) / 3.0,
                observed_order: ((l[0] - l[1]) / (l[1] - l[2])).abs().log2(),
            }
        })
        .collect())
}

/// Rounds node coordinates that coincide with `a, b, c, d` up to rounding so the
/// jump conventions of the initial data apply exactly.
fn snap(x: f64, p: &ProblemParams) -> f64 {
    for v in [p.a, p.b, p.c, p.d] {
        if (x - v).abs() <= 1e-12 * v.abs().max(1.0) {
            return v;
        }
    }
    x
}
