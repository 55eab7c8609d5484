//! Vanishing-viscosity limits: wave curves, zone layout, limit fields and the
//! convergence check against the viscous solutions.

mod curves;
mod fields;

pub use curves::{
    build_curves, Completeness, Curve, CurveLabel, CurvePiece, CurveSet, CurveShape, IntersectionTime,
};
pub use fields::{
    displayed_u_clauses, probe_points, r_limit, u_limit, verify_limit_convergence, ConvergenceReport,
    ConvergenceTolerances, DisplayClause, Fidelity, LimitSolution, LimitValue, PointConvergence, Zone,
    BOUNDARY_LABEL,
};
