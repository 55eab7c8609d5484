//! Problem parameters, sign-case classification and scaled coordinates.
//!
//! The initial data are `u₀ = u_a·χ(−∞,a) + u_b·δ_b` and
//! `ρ₀ = ρ_c·χ(−∞,c) + ρ_d·δ_d` with `a < c < b < d` and `u_a, u_b ≠ 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight constants of the initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub a: f64,
    pub c: f64,
    pub b: f64,
    pub d: f64,
    pub u_a: f64,
    pub u_b: f64,
    pub rho_c: f64,
    pub rho_d: f64,
}

/// Unvalidated parameters as read from JSON, in the field order `a, c, b, d`.
pub type RawParams = ProblemParams;

/// Checks the ordering and sign hypotheses and returns the validated parameters.
///
/// Errors name the violated inequality, e.g. `"c < b violated"`.
pub fn validate_params(raw: RawParams) -> Result<ProblemParams> {
    let fields = [
        ("a", raw.a),
        ("c", raw.c),
        ("b", raw.b),
        ("d", raw.d),
        ("u_a", raw.u_a),
        ("u_b", raw.u_b),
        ("rho_c", raw.rho_c),
        ("rho_d", raw.rho_d),
    ];
    for (name, v) in fields {
        if !v.is_finite() {
            return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
        }
    }
    if raw.a >= raw.c {
        return Err(Error::InvalidParams("a < c violated".into()));
    }
    if raw.c >= raw.b {
        return Err(Error::InvalidParams("c < b violated".into()));
    }
    if raw.b >= raw.d {
        return Err(Error::InvalidParams("b < d violated".into()));
    }
    if raw.u_a == 0.0 {
        return Err(Error::InvalidParams("u_a must be nonzero".into()));
    }
    if raw.u_b == 0.0 {
        return Err(Error::InvalidParams("u_b must be nonzero".into()));
    }
    Ok(raw)
}

impl ProblemParams {
    /// Builds and validates parameters from positional values.
    #[allow(clippy::too_many_arguments)]
    pub fn new(a: f64, c: f64, b: f64, d: f64, u_a: f64, u_b: f64, rho_c: f64, rho_d: f64) -> Result<Self> {
        validate_params(Self { a, c, b, d, u_a, u_b, rho_c, rho_d })
    }

    /// Same parameters with both density amplitudes set to zero.
    pub fn without_density(mut self) -> Self {
        self.rho_c = 0.0;
        self.rho_d = 0.0;
        self
    }
}

/// The four sign cases of `(u_a, u_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    /// `u_a < 0`, `u_b > 0`.
    Case1,
    /// `u_a > 0`, `u_b > 0`.
    Case2,
    /// `u_a > 0`, `u_b < 0`.
    Case3,
    /// `u_a < 0`, `u_b < 0`.
    Case4,
}

impl CaseId {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Case1 => "case1",
            CaseId::Case2 => "case2",
            CaseId::Case3 => "case3",
            CaseId::Case4 => "case4",
        }
    }
}

/// Subcase discriminator within a sign case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subcase {
    /// Case 1 has no subcases.
    None,
    /// Case 2 with `2u_b < u_a(b−a)`.
    Case2Strong,
    /// Case 2 with `u_b < u_a(b−a) ≤ 2u_b`.
    Case2Middle,
    /// Case 2 with `u_a(b−a) ≤ u_b`.
    Case2Weak,
    /// Case 3 with `|u_b| < u_a(b−a)`.
    Case3Small,
    /// Case 3 with `|u_b| ≥ u_a(b−a)`.
    Case3Large,
    /// Case 4 with `u_a(b−a) > u_b`.
    Case4Above,
    /// Case 4 with `u_a(b−a) ≤ u_b`.
    Case4AtMost,
}

impl Subcase {
    pub fn as_str(self) -> &'static str {
        match self {
            Subcase::None => "none",
            Subcase::Case2Strong => "2u_b<u_a(b-a)",
            Subcase::Case2Middle => "u_b<u_a(b-a)<=2u_b",
            Subcase::Case2Weak => "u_a(b-a)<=u_b",
            Subcase::Case3Small => "|u_b|<u_a(b-a)",
            Subcase::Case3Large => "|u_b|>=u_a(b-a)",
            Subcase::Case4Above => "u_a(b-a)>u_b",
            Subcase::Case4AtMost => "u_a(b-a)<=u_b",
        }
    }
}

/// Sign case, subcase and whether the input sat exactly on a subcase boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignCase {
    pub case_id: CaseId,
    pub subcase: Subcase,
    /// True when one of the subcase inequalities held with equality.
    pub on_subcase_boundary: bool,
}

/// Classifies validated parameters into the four sign cases and their subcases.
///
/// Ties go to the side written with `≤` (e.g. `u_a(b−a) = 2u_b` is the Case-2
/// middle subcase) and set [`SignCase::on_subcase_boundary`].
pub fn classify_case(p: &ProblemParams) -> SignCase {
    let k = p.u_a * (p.b - p.a);
    let (case_id, subcase, tie) = match (p.u_a > 0.0, p.u_b > 0.0) {
        (false, true) => (CaseId::Case1, Subcase::None, false),
        (true, true) => {
            let sub = if 2.0 * p.u_b < k {
                Subcase::Case2Strong
            } else if p.u_b < k {
                Subcase::Case2Middle
            } else {
                Subcase::Case2Weak
            };
            (CaseId::Case2, sub, k == 2.0 * p.u_b || k == p.u_b)
        }
        (true, false) => {
            let sub = if p.u_b.abs() < k { Subcase::Case3Small } else { Subcase::Case3Large };
            (CaseId::Case3, sub, p.u_b.abs() == k)
        }
        (false, false) => {
            let sub = if k > p.u_b { Subcase::Case4Above } else { Subcase::Case4AtMost };
            (CaseId::Case4, sub, k == p.u_b)
        }
    };
    SignCase { case_id, subcase, on_subcase_boundary: tie }
}

/// The five nonnegative similarity variables at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledArgs {
    /// `|x−a| / √(2tε)`.
    pub a: f64,
    /// `|x−b| / √(2tε)`.
    pub b: f64,
    /// `|x−c| / √(2tε)`.
    pub c: f64,
    /// `|x−d| / √(2tε)`.
    pub d: f64,
    /// `|x−a−u_a t| / √(2tε)`.
    pub p: f64,
}

/// Validates `t > 0` and `ε > 0` (both finite) for the viscous evaluators.
pub(crate) fn check_time_eps(t: f64, eps: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive and finite, got {t}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("epsilon must be positive and finite, got {eps}")));
    }
    Ok(())
}

/// Computes `A_ε, B_ε, C_ε, D_ε, P_ε` at `(x, t)`.
pub fn scaled_args(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<ScaledArgs> {
    check_time_eps(t, eps)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let s = (2.0 * t * eps).sqrt();
    Ok(ScaledArgs {
        a: (x - p.a).abs() / s,
        b: (x - p.b).abs() / s,
        c: (x - p.c).abs() / s,
        d: (x - p.d).abs() / s,
        p: (x - p.a - p.u_a * t).abs() / s,
    })
}
