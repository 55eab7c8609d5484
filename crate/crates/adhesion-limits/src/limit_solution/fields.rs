//! Limit fields `u(x, t)` and `R(x, t)` on the zone decomposition.
//!
//! At every `t > 0` the six edges of the [`CurveSet`] split the line into seven
//! zones, some possibly empty:
//!
//! | zone            | `u`         | `R` (corrected)      |
//! |-----------------|-------------|----------------------|
//! | `left-constant` | `u_a`       | `ρ_c(x−c−u_a t)`     |
//! | `fan-a`         | `(x−a)/t`   | `ρ_c(a−c)`           |
//! | `rest-dense`    | `0`         | `ρ_c(x−c)`           |
//! | `rest`          | `0`         | `0`                  |
//! | `fan-b`         | `(x−b)/t`   | `0`                  |
//! | `right-rest`    | `0`         | `0`                  |
//! | `right-dense`   | `0`         | `ρ_d`                |

use serde::{Deserialize, Serialize};

use super::curves::{build_curves, CurveSet};
use crate::error::{Error, Result};
use crate::problem::{classify_case, CaseId, ProblemParams, SignCase, Subcase};
use crate::viscous_exact::{r_eps_stable, u_eps_stable};

/// The seven zones, left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Zone {
    LeftConstant,
    FanA,
    RestDense,
    Rest,
    FanB,
    RightRest,
    RightDense,
}

impl Zone {
    pub const ALL: [Zone; 7] =
        [Zone::LeftConstant, Zone::FanA, Zone::RestDense, Zone::Rest, Zone::FanB, Zone::RightRest, Zone::RightDense];

    /// Stable region label used in exports.
    pub fn label(self) -> &'static str {
        match self {
            Zone::LeftConstant => "left-constant",
            Zone::FanA => "fan-a",
            Zone::RestDense => "rest-dense",
            Zone::Rest => "rest",
            Zone::FanB => "fan-b",
            Zone::RightRest => "right-rest",
            Zone::RightDense => "right-dense",
        }
    }

    fn index(self) -> usize {
        Zone::ALL.iter().position(|z| *z == self).unwrap_or(0)
    }
}

/// Label reported for points on a zone edge or on one of `a, b, c, d`.
pub const BOUNDARY_LABEL: &str = "boundary";

/// Which version of the density formulas to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Fidelity {
    /// Fan-zone `R = ρ_c(a−c)` and atom weights equal to the jumps of `R`
    /// (checked against the viscous limit and the distributional identity).
    #[default]
    Corrected,
    /// Fan-zone `R` quadratic in `x` as in the printed `R` table, and the printed
    /// Case-1 and Case-4 densities with their atom weights taken verbatim.
    AsPrinted,
    /// As [`Fidelity::AsPrinted`] with the bare `−2` constants removed from the Case-4 atom weights.
    AsPrintedDroppedConstants,
}

impl Fidelity {
    pub fn as_str(self) -> &'static str {
        match self {
            Fidelity::Corrected => "corrected",
            Fidelity::AsPrinted => "as-printed",
            Fidelity::AsPrintedDroppedConstants => "as-printed-dropped-constants",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "corrected" => Some(Fidelity::Corrected),
            "as-printed" => Some(Fidelity::AsPrinted),
            "as-printed-dropped-constants" => Some(Fidelity::AsPrintedDroppedConstants),
            _ => None,
        }
    }
}

/// A limit value with its region label; `value` is `None` on boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitValue {
    pub value: Option<f64>,
    pub zone: Option<Zone>,
}

impl LimitValue {
    pub fn label(&self) -> &'static str {
        self.zone.map_or(BOUNDARY_LABEL, Zone::label)
    }
}

/// The explicit vanishing-viscosity limit of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSolution {
    pub params: ProblemParams,
    pub case: SignCase,
    pub curves: CurveSet,
    pub fidelity: Fidelity,
}

/// Relative width of the band around an edge that counts as the edge itself.
const BOUNDARY_TOL: f64 = 1e-12;

impl LimitSolution {
    pub fn new(params: ProblemParams, fidelity: Fidelity) -> Self {
        let case = classify_case(&params);
        let curves = build_curves(&params, case);
        LimitSolution { params, case, curves, fidelity }
    }

    /// Edge positions `[e₁, …, e₆]` at time `t`; zone `k` is `(e_k, e_{k+1})` with `e₀ = −∞`, `e₇ = ∞`.
    pub fn layout(&self, t: f64) -> [f64; 6] {
        self.curves.edge_positions(t)
    }

    /// Open interval of a zone at time `t` (possibly empty).
    pub fn zone_interval(&self, zone: Zone, t: f64) -> (f64, f64) {
        let e = self.layout(t);
        let i = zone.index();
        let lo = if i == 0 { f64::NEG_INFINITY } else { e[i - 1] };
        let hi = if i == 6 { f64::INFINITY } else { e[i] };
        (lo, hi)
    }

    fn is_boundary(&self, x: f64, t: f64) -> bool {
        let p = &self.params;
        let tol = BOUNDARY_TOL * x.abs().max(1.0);
        self.layout(t).iter().chain([p.a, p.b, p.c, p.d].iter()).any(|e| (x - e).abs() <= tol)
    }

    /// Zone containing `x` at time `t`, or `None` on an edge or on `a, b, c, d`.
    pub fn zone_at(&self, x: f64, t: f64) -> Option<Zone> {
        if self.is_boundary(x, t) {
            return None;
        }
        let e = self.layout(t);
        let i = e.iter().take_while(|&&edge| edge < x).count();
        Some(Zone::ALL[i])
    }

    /// Distance from `x` to the nearest edge or initial point at time `t`.
    pub fn distance_to_boundary(&self, x: f64, t: f64) -> f64 {
        let p = &self.params;
        self.layout(t).iter().chain([p.a, p.b, p.c, p.d].iter()).map(|e| (x - e).abs()).fold(f64::INFINITY, f64::min)
    }

    /// `u` in a given zone.
    pub fn zone_u(&self, zone: Zone, x: f64, t: f64) -> f64 {
        let p = &self.params;
        match zone {
            Zone::LeftConstant => p.u_a,
            Zone::FanA => (x - p.a) / t,
            Zone::FanB => (x - p.b) / t,
            Zone::RestDense | Zone::Rest | Zone::RightRest | Zone::RightDense => 0.0,
        }
    }

    /// `R` in a given zone under the configured fidelity.
    pub fn zone_r(&self, zone: Zone, x: f64, t: f64) -> f64 {
        let p = &self.params;
        match zone {
            Zone::LeftConstant => p.rho_c * (x - p.c - p.u_a * t),
            Zone::FanA => match self.fidelity {
                Fidelity::Corrected => p.rho_c * (p.a - p.c),
                Fidelity::AsPrinted | Fidelity::AsPrintedDroppedConstants => {
                    let uat = p.u_a * t;
                    p.rho_c * (2.0 * (x - p.a - uat) * (x - p.a) + (p.a - p.c) * uat) / uat
                }
            },
            Zone::RestDense => p.rho_c * (x - p.c),
            Zone::Rest | Zone::FanB | Zone::RightRest => 0.0,
            Zone::RightDense => p.rho_d,
        }
    }

    /// `∂R/∂x` inside a zone (the absolutely continuous density).
    pub fn zone_density(&self, zone: Zone, x: f64, t: f64) -> f64 {
        let p = &self.params;
        match zone {
            Zone::LeftConstant | Zone::RestDense => p.rho_c,
            Zone::FanA => match self.fidelity {
                Fidelity::Corrected => 0.0,
                _ => p.rho_c * (4.0 * (x - p.a) - 2.0 * p.u_a * t) / (p.u_a * t),
            },
            _ => 0.0,
        }
    }

    /// Limit velocity; boundary points get `value = None`.
    pub fn u(&self, x: f64, t: f64) -> LimitValue {
        let zone = self.zone_at(x, t);
        LimitValue { value: zone.map(|z| self.zone_u(z, x, t)), zone }
    }

    /// Limit `R`; boundary points get `value = None`.
    pub fn r(&self, x: f64, t: f64) -> LimitValue {
        let zone = self.zone_at(x, t);
        LimitValue { value: zone.map(|z| self.zone_r(z, x, t)), zone }
    }

    /// Nonempty zones at time `t`, each with its interval clipped to `window`.
    pub fn zones_in(&self, t: f64, window: (f64, f64)) -> Vec<(Zone, f64, f64)> {
        Zone::ALL
            .iter()
            .filter_map(|&z| {
                let (lo, hi) = self.zone_interval(z, t);
                let (lo, hi) = (lo.max(window.0), hi.min(window.1));
                (hi > lo).then_some((z, lo, hi))
            })
            .collect()
    }
}

/// Limit velocity with its region label.
pub fn u_limit(p: &ProblemParams, x: f64, t: f64) -> LimitValue {
    LimitSolution::new(*p, Fidelity::Corrected).u(x, t)
}

/// Limit `R` with its region label.
pub fn r_limit(p: &ProblemParams, x: f64, t: f64) -> LimitValue {
    LimitSolution::new(*p, Fidelity::Corrected).r(x, t)
}

/// One clause of a displayed `u` formula: its value and whether its set contains the point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisplayClause {
    pub value: f64,
    pub label: &'static str,
}

/// Transcription of the displayed set-valued definitions of `u` for each case.
///
/// Returns every clause whose set contains `(x, t)`; on interior points exactly
/// one clause fires. In Case 3 the `(a, b)` clauses use `l~ = a + u_a t/2` and the
/// `(b, ∞)` clauses use `l = a + u_b/u_a + u_a t/2`.
pub fn displayed_u_clauses(p: &ProblemParams, x: f64, t: f64) -> Vec<DisplayClause> {
    let case = classify_case(p);
    let (a, b, c, d, ua, ub) = (p.a, p.b, p.c, p.d, p.u_a, p.u_b);
    let r = a + ua * t;
    let in_ab = x > a && x < b && x != c;
    let right_of_b = x > b && x != d;
    let left_of_a = x < a;
    let mut out = Vec::new();
    let mut push = |cond: bool, value: f64, label: &'static str| {
        if cond {
            out.push(DisplayClause { value, label });
        }
    };
    let fan_a = (x - a) / t;
    let fan_b = (x - b) / t;
    match case.case_id {
        CaseId::Case1 => {
            let pp = b + (2.0 * ub * t).sqrt();
            push(x < r, ua, "left-constant");
            push(x > r && x < a, fan_a, "fan-a");
            push((x > a && x < b) || x > pp, 0.0, "rest");
            push(x > b && x < pp, fan_b, "fan-b");
        }
        CaseId::Case2 => {
            let l = a + ub / ua + ua * t / 2.0;
            let lt = a + ua * t / 2.0;
            let pp = b + (2.0 * ub * t).sqrt();
            let q = b + ua * t - (2.0 * ua * (b - a) * t).sqrt();
            push(
                left_of_a
                    || (in_ab && x < lt)
                    || (right_of_b && (x < pp.min(q).min(r) || (x > pp && x < l.min(q).min(r)))),
                ua,
                "left-constant",
            );
            push(right_of_b && ((x > r && x < pp) || (x > q && x < pp.min(r))), fan_b, "fan-b");
            push(
                (in_ab && x > lt && x != r)
                    || (right_of_b
                        && (x > pp.max(r) || (x > pp.max(q) && x < r) || (x > l.max(pp) && x < q.min(r)))),
                0.0,
                "rest",
            );
        }
        CaseId::Case3 => {
            let l = a + ub / ua + ua * t / 2.0;
            let lt = a + ua * t / 2.0;
            let pp = b - (-2.0 * ub * t).sqrt();
            let q = b + ua * t - (2.0 * (ua * (b - a) - ub) * t).sqrt();
            push(
                (left_of_a && x < q)
                    || (in_ab && x < q.min(r) && (x < lt.min(pp) || x > pp))
                    || (right_of_b && x < l.min(r)),
                ua,
                "left-constant",
            );
            push(
                (left_of_a && x > q) || (in_ab && ((x > pp.max(q) && x < r) || x > pp.max(r))),
                fan_b,
                "fan-b",
            );
            push(
                (in_ab
                    && ((x > r && x < pp)
                        || (x < pp.min(r) && ((x > lt && x < q) || x > q))))
                    || (right_of_b && ((x > l && x < r) || x > r)),
                0.0,
                "rest",
            );
        }
        CaseId::Case4 => {
            let l = (a + b) / 2.0 + ub / (b - a) * t;
            let pp = b - (-2.0 * ub * t).sqrt();
            let k = ua * (b - a) - ub;
            if case.subcase == Subcase::Case4Above {
                let q = b + ua * t - (2.0 * k * t).sqrt();
                push(left_of_a && x < q.min(r), ua, "left-constant");
                push(left_of_a && x > r && x < l, fan_a, "fan-a");
                push((left_of_a && (x > l.max(r) || (x > q && x < r))) || (in_ab && x > pp), fan_b, "fan-b");
            } else {
                push(left_of_a && x < r, ua, "left-constant");
                push(left_of_a && x > r && x < l, fan_a, "fan-a");
                push((left_of_a && x > l.max(r)) || (in_ab && x > pp), fan_b, "fan-b");
            }
            push((in_ab && x < pp) || right_of_b, 0.0, "rest");
        }
    }
    out
}

/// Convergence data of one probe point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConvergence {
    pub x: f64,
    pub t: f64,
    pub zone: &'static str,
    pub u_limit: f64,
    pub r_limit: f64,
    /// `|u^ε − u|` along the ε sequence.
    pub u_errors: Vec<f64>,
    /// `|R^ε − R|` along the ε sequence.
    pub r_errors: Vec<f64>,
    /// Both error sequences are non-increasing in their last two terms (up to `1e-12`).
    pub tail_non_increasing: bool,
    pub pass: bool,
}

/// Result of [`verify_limit_convergence`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub case: &'static str,
    pub subcase: &'static str,
    pub epsilons: Vec<f64>,
    pub points: Vec<PointConvergence>,
    pub pass: bool,
}

/// Tolerances for [`verify_limit_convergence`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceTolerances {
    /// Bound on the final `|u^ε − u|`.
    pub u_abs: f64,
    /// Bound on the final `|R^ε − R| / (1 + |R|)`.
    pub r_rel: f64,
    /// Minimal distance between a probe point and any edge.
    pub margin: f64,
}

impl Default for ConvergenceTolerances {
    fn default() -> Self {
        ConvergenceTolerances { u_abs: 0.01, r_rel: 0.05, margin: 0.1 }
    }
}

/// Slack allowed when comparing the last two errors of a sequence.
const MONOTONE_SLACK: f64 = 1e-12;

/// Evaluates `u^ε` and `R^ε` at each point along the ε sequence and compares
/// with the limit fields.
///
/// Points closer than `tol.margin` to an edge are rejected with
/// [`Error::NearBoundary`], since convergence there is arbitrarily slow.
pub fn verify_limit_convergence(
    sol: &LimitSolution,
    points: &[(f64, f64)],
    epsilons: &[f64],
    tol: ConvergenceTolerances,
) -> Result<ConvergenceReport> {
    if epsilons.is_empty() {
        return Err(Error::Config("the epsilon sequence is empty".into()));
    }
    let p = &sol.params;
    let mut reports = Vec::with_capacity(points.len());
    for &(x, t) in points {
        let dist = sol.distance_to_boundary(x, t);
        if dist < tol.margin {
            return Err(Error::NearBoundary { x, t, distance: dist, margin: tol.margin });
        }
        let zone = sol.zone_at(x, t).expect("interior point has a zone");
        let (ul, rl) = (sol.zone_u(zone, x, t), sol.zone_r(zone, x, t));
        let mut u_errors = Vec::with_capacity(epsilons.len());
        let mut r_errors = Vec::with_capacity(epsilons.len());
        for &eps in epsilons {
            u_errors.push((u_eps_stable(p, x, t, eps)?.value - ul).abs());
            r_errors.push((r_eps_stable(p, x, t, eps)?.value - rl).abs());
        }
        let tail_ok = |v: &[f64]| v.len() < 2 || v[v.len() - 1] <= v[v.len() - 2] + MONOTONE_SLACK;
        let tail_non_increasing = tail_ok(&u_errors) && tail_ok(&r_errors);
        let pass = tail_non_increasing
            && *u_errors.last().unwrap() <= tol.u_abs
            && *r_errors.last().unwrap() <= tol.r_rel * (1.0 + rl.abs());
        reports.push(PointConvergence {
            x,
            t,
            zone: zone.label(),
            u_limit: ul,
            r_limit: rl,
            u_errors,
            r_errors,
            tail_non_increasing,
            pass,
        });
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(ConvergenceReport {
        case: sol.case.case_id.as_str(),
        subcase: sol.case.subcase.as_str(),
        epsilons: epsilons.to_vec(),
        points: reports,
        pass,
    })
}

/// Probe points for a convergence study: at each time, every nonempty zone
/// (clipped to `window`) is shrunk by `margin` on both sides and sampled at its
/// quartiles. Zones narrower than `2·margin` after clipping are skipped.
pub fn probe_points(sol: &LimitSolution, times: &[f64], window: (f64, f64), margin: f64) -> Vec<(f64, f64, Zone)> {
    let p = &sol.params;
    let mut out = Vec::new();
    for &t in times {
        // Split zones further at a, b, c, d, which are excluded points of the displays.
        for (zone, lo, hi) in sol.zones_in(t, window) {
            let mut cuts = vec![lo];
            cuts.extend([p.a, p.c, p.b, p.d].iter().copied().filter(|&v| v > lo && v < hi));
            cuts.push(hi);
            let (mut best_lo, mut best_hi) = (lo, lo);
            for w in cuts.windows(2) {
                if w[1] - w[0] > best_hi - best_lo {
                    best_lo = w[0];
                    best_hi = w[1];
                }
            }
            let (lo, hi) = (best_lo + margin, best_hi - margin);
            if hi <= lo {
                continue;
            }
            for k in 1..=3 {
                let x = lo + (hi - lo) * k as f64 / 4.0;
                if sol.distance_to_boundary(x, t) >= margin {
                    out.push((x, t, zone));
                }
            }
        }
    }
    out
}
