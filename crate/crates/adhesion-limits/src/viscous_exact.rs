//! Closed-form viscous solutions.
//!
//! With `s = √(2tε)`, `w = (x−a−u_a t)/s` and
//! `ΔE = ((x−a−u_a t)² − (x−a)²)/s² = u_a(u_a t − 2(x−a))/(2ε)`, the two heat
//! solutions are
//!
//! ```text
//! √π·V = e^{ΔE} erfc(w) + [erfc((x−b)/s) − erfc((x−a)/s)] + e^{−u_b/ε} erfc(−(x−b)/s)
//! √π·S = ρ_c (x−c−u_a t) e^{ΔE} erfc(w) − ρ_c (s/2) e^{−(x−c)²/s²}
//!        + ρ_c (x−c) [erfc((x−c)/s) − erfc((x−a)/s)] + ρ_d e^{−u_b/ε} erfc(−(x−d)/s)
//! ```
//!
//! and the recovered fields are `u = −εV_x/V` and `R = S/V`, where
//!
//! ```text
//! √π·V·u = u_a e^{ΔE} erfc(w) + (ε/s) e^{−(x−b)²/s²} (1 − e^{−u_b/ε}).
//! ```
//!
//! The stable evaluators expand every `erfc(±z)` according to the sign of its
//! argument (either `erfc_scaled(z)·e^{−z²}` or `√π − erfc_scaled(|z|)·e^{−z²}`),
//! collect all summands as `coefficient × exp(exponent)` with exponents assembled
//! as explicit differences of squared scaled arguments and `u/ε` terms, and only
//! exponentiate after subtracting the largest exponent. The sign pattern is
//! exactly the viscous region of the point (five base intervals split at
//! `x = a + u_a t`), reported as [`ViscousRegion`].

use crate::error::{Error, Result};
use crate::problem::{check_time_eps, ProblemParams};
use crate::special_fn::{erfc_paper, erfcx_nonnegative, HALF_SQRT_PI, SQRT_PI};

/// Largest exponent difference that is exponentiated without saturating.
const MAX_EXPONENT: f64 = 709.0;

/// A real number stored as `mantissa · exp(log_scale)`.
///
/// The viscous solutions themselves are `exp(−U/ε)`-sized and leave the `f64`
/// range for small `ε`, while all ratios of interest stay moderate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mantissa: 0.0, log_scale: 0.0 };

    /// Wraps an ordinary float.
    pub fn from_f64(v: f64) -> Self {
        Scaled { mantissa: v, log_scale: 0.0 }
    }

    /// Converts to `f64`, reporting overflow instead of returning infinity.
    pub fn to_f64(self) -> Result<f64> {
        if self.mantissa == 0.0 {
            return Ok(0.0);
        }
        let v = self.mantissa * self.log_scale.exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(format!(
                "value {}·e^{} is outside the f64 range",
                self.mantissa, self.log_scale
            )))
        }
    }

    /// Natural logarithm of the absolute value (`-inf` for zero).
    pub fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.log_scale
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// Multiplies by a plain factor.
    pub fn scale(self, k: f64) -> Self {
        Scaled { mantissa: self.mantissa * k, log_scale: self.log_scale }
    }

    /// Ratio `self / other` as a plain float.
    pub fn ratio(self, other: Scaled) -> Result<f64> {
        if other.mantissa == 0.0 {
            return Err(Error::Overflow("division by a vanishing scaled value".into()));
        }
        if self.mantissa == 0.0 {
            return Ok(0.0);
        }
        let de = self.log_scale - other.log_scale;
        if de > MAX_EXPONENT {
            return Err(Error::Overflow(format!("ratio exponent {de} saturates")));
        }
        Ok(self.mantissa / other.mantissa * de.exp())
    }

    /// Sum of two scaled values, expressed on the larger of the two scales.
    pub fn plus(self, other: Scaled) -> Scaled {
        if self.mantissa == 0.0 {
            return other;
        }
        if other.mantissa == 0.0 {
            return self;
        }
        let m = self.log_scale.max(other.log_scale);
        Scaled {
            mantissa: self.mantissa * (self.log_scale - m).exp() + other.mantissa * (other.log_scale - m).exp(),
            log_scale: m,
        }
    }

    /// `|self − other| / reference`, all on a common scale.
    pub fn relative_difference(self, other: Scaled, reference: Scaled) -> f64 {
        let diff = self.plus(other.scale(-1.0));
        if diff.mantissa == 0.0 {
            return 0.0;
        }
        (diff.ln_abs() - reference.ln_abs()).exp()
    }
}

/// One summand `coef · exp(expo)`.
#[derive(Debug, Clone, Copy)]
struct Term {
    coef: f64,
    expo: f64,
}

/// A finite sum of exponentially scaled terms.
///
/// Terms with bitwise identical exponents are merged by adding coefficients, so
/// pairs like `+√π` and `−√π` from two reflected erfc expansions cancel exactly.
#[derive(Debug, Clone, Default)]
struct ExpSum {
    terms: Vec<Term>,
}

impl ExpSum {
    fn push(&mut self, coef: f64, expo: f64) {
        if coef == 0.0 {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|t| t.expo == expo) {
            t.coef += coef;
        } else {
            self.terms.push(Term { coef, expo });
        }
    }

    /// Adds `coef · e^{extra} · erfc(z)` using the sign-appropriate expansion.
    fn push_erfc(&mut self, coef: f64, extra: f64, z: f64) {
        if z >= 0.0 {
            self.push(coef * HALF_SQRT_PI * erfcx_nonnegative(z), extra - z * z);
        } else {
            self.push(coef * SQRT_PI, extra);
            self.push(-coef * HALF_SQRT_PI * erfcx_nonnegative(-z), extra - z * z);
        }
    }

    /// Adds `coef · e^{ΔE} · erfc(w)` where `ΔE − w² = −A²` is supplied exactly.
    fn push_shifted(&mut self, coef: f64, delta_e: f64, w: f64, minus_a2: f64) {
        if w >= 0.0 {
            self.push(coef * HALF_SQRT_PI * erfcx_nonnegative(w), minus_a2);
        } else {
            self.push(coef * SQRT_PI, delta_e);
            self.push(-coef * HALF_SQRT_PI * erfcx_nonnegative(-w), minus_a2);
        }
    }

    fn evaluate(&self) -> Result<Scaled> {
        let mut max = f64::NEG_INFINITY;
        for t in &self.terms {
            if !t.expo.is_finite() || !t.coef.is_finite() {
                return Err(Error::Overflow(format!(
                    "exponent assembly saturated (coef {}, exponent {})",
                    t.coef, t.expo
                )));
            }
            if t.coef != 0.0 {
                max = max.max(t.expo);
            }
        }
        if max == f64::NEG_INFINITY {
            return Ok(Scaled::ZERO);
        }
        let mantissa = self.terms.iter().filter(|t| t.coef != 0.0).map(|t| t.coef * (t.expo - max).exp()).sum();
        Ok(Scaled { mantissa, log_scale: max })
    }

    /// Sum of absolute values of all terms: the scale against which cancellation is measured.
    fn magnitude(&self) -> Result<Scaled> {
        let mut abs = self.clone();
        for t in &mut abs.terms {
            t.coef = t.coef.abs();
        }
        abs.evaluate()
    }
}

/// The five base intervals delimited by `a < c < b < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseInterval {
    BelowA,
    AToC,
    CToB,
    BToD,
    AboveD,
}

/// Region of the viscous region tables: a base interval and the side of `x = a + u_a t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ViscousRegion {
    pub interval: BaseInterval,
    /// True when `x > a + u_a t`.
    pub right_of_shift: bool,
}

impl ViscousRegion {
    /// Stable label, e.g. `"a<x<c|x>a+u_a*t"`.
    pub fn label(self) -> &'static str {
        use BaseInterval::*;
        match (self.interval, self.right_of_shift) {
            (BelowA, false) => "x<a|x<a+u_a*t",
            (BelowA, true) => "x<a|x>a+u_a*t",
            (AToC, false) => "a<x<c|x<a+u_a*t",
            (AToC, true) => "a<x<c|x>a+u_a*t",
            (CToB, false) => "c<x<b|x<a+u_a*t",
            (CToB, true) => "c<x<b|x>a+u_a*t",
            (BToD, false) => "b<x<d|x<a+u_a*t",
            (BToD, true) => "b<x<d|x>a+u_a*t",
            (AboveD, false) => "x>d|x<a+u_a*t",
            (AboveD, true) => "x>d|x>a+u_a*t",
        }
    }
}

/// Region of `(x, t)`, or `None` when `x` lies exactly on `a, b, c, d` or `a + u_a t`.
pub fn viscous_region(p: &ProblemParams, x: f64, t: f64) -> Option<ViscousRegion> {
    let shift = p.a + p.u_a * t;
    if x == p.a || x == p.b || x == p.c || x == p.d || x == shift {
        return None;
    }
    let interval = if x < p.a {
        BaseInterval::BelowA
    } else if x < p.c {
        BaseInterval::AToC
    } else if x < p.b {
        BaseInterval::CToB
    } else if x < p.d {
        BaseInterval::BToD
    } else {
        BaseInterval::AboveD
    };
    Some(ViscousRegion { interval, right_of_shift: x > shift })
}

/// Where a recovered value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    /// Interior point, evaluated by the stable region expression.
    Region(ViscousRegion),
    /// Point on a region boundary, evaluated by the direct quotient (or by the
    /// stable expansion when the direct quotient overflows; both are exact there).
    Boundary,
}

impl RegionTag {
    pub fn label(self) -> &'static str {
        match self {
            RegionTag::Region(r) => r.label(),
            RegionTag::Boundary => "boundary",
        }
    }
}

/// A recovered field value with its region tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tagged {
    pub value: f64,
    pub tag: RegionTag,
}

/// All viscous quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousState {
    /// `V^ε` (prefactor `1/√π` included).
    pub v: Scaled,
    /// `S^ε` (prefactor `1/√π` included).
    pub s: Scaled,
    /// `u^ε = −εV_x/V`.
    pub u: f64,
    /// `R^ε = S/V`.
    pub r: f64,
    pub tag: RegionTag,
}

/// Shared point data for the expansions.
struct Point {
    s: f64,
    za: f64,
    zb: f64,
    zc: f64,
    zd: f64,
    w: f64,
    delta_e: f64,
    minus_a2: f64,
    ub_over_eps: f64,
}

impl Point {
    fn new(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<Self> {
        check_time_eps(t, eps)?;
        if !x.is_finite() {
            return Err(Error::Domain(format!("x must be finite, got {x}")));
        }
        let s = (2.0 * t * eps).sqrt();
        let za = (x - p.a) / s;
        Ok(Point {
            s,
            za,
            zb: (x - p.b) / s,
            zc: (x - p.c) / s,
            zd: (x - p.d) / s,
            w: (x - p.a - p.u_a * t) / s,
            delta_e: p.u_a * (p.u_a * t - 2.0 * (x - p.a)) / (2.0 * eps),
            minus_a2: -za * za,
            ub_over_eps: p.u_b / eps,
        })
    }
}

/// `√π·V` as an exponential sum.
fn v_sum(pt: &Point) -> ExpSum {
    let mut e = ExpSum::default();
    e.push_shifted(1.0, pt.delta_e, pt.w, pt.minus_a2);
    e.push_erfc(1.0, 0.0, pt.zb);
    e.push_erfc(-1.0, 0.0, pt.za);
    e.push_erfc(1.0, -pt.ub_over_eps, -pt.zb);
    e
}

/// `√π·V·u` as an exponential sum.
fn uv_sum(p: &ProblemParams, pt: &Point, eps: f64) -> ExpSum {
    let mut e = ExpSum::default();
    e.push_shifted(p.u_a, pt.delta_e, pt.w, pt.minus_a2);
    let k = eps / pt.s;
    let b2 = pt.zb * pt.zb;
    // e^{−B²}(1 − e^{−u_b/ε}) written without forming a large exponential.
    if p.u_b > 0.0 {
        e.push(k * -(-pt.ub_over_eps).exp_m1(), -b2);
    } else {
        e.push(-k * -(pt.ub_over_eps).exp_m1(), -b2 - pt.ub_over_eps);
    }
    e
}

/// `√π·S` as an exponential sum.
fn s_sum(p: &ProblemParams, pt: &Point, x: f64, t: f64) -> ExpSum {
    let mut e = ExpSum::default();
    if p.rho_c != 0.0 {
        e.push_shifted(p.rho_c * (x - p.c - p.u_a * t), pt.delta_e, pt.w, pt.minus_a2);
        e.push(-p.rho_c * pt.s / 2.0, -pt.zc * pt.zc);
        e.push_erfc(p.rho_c * (x - p.c), 0.0, pt.zc);
        e.push_erfc(-p.rho_c * (x - p.c), 0.0, pt.za);
    }
    if p.rho_d != 0.0 {
        e.push_erfc(p.rho_d, -pt.ub_over_eps, -pt.zd);
    }
    e
}

/// `V^ε(x, t)` in scaled form.
pub fn v_eps(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<Scaled> {
    let pt = Point::new(p, x, t, eps)?;
    Ok(v_sum(&pt).evaluate()?.scale(1.0 / SQRT_PI))
}

/// `S^ε(x, t)` in scaled form.
pub fn s_eps(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<Scaled> {
    let pt = Point::new(p, x, t, eps)?;
    Ok(s_sum(p, &pt, x, t).evaluate()?.scale(1.0 / SQRT_PI))
}

/// Sum of absolute values of the summands of `S^ε`, in the same units as [`s_eps`].
///
/// `S^ε` changes sign, so comparisons against other evaluations are made relative
/// to this magnitude.
pub fn s_eps_magnitude(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<Scaled> {
    let pt = Point::new(p, x, t, eps)?;
    Ok(s_sum(p, &pt, x, t).magnitude()?.scale(1.0 / SQRT_PI))
}

fn stable_u(p: &ProblemParams, pt: &Point, eps: f64) -> Result<f64> {
    uv_sum(p, pt, eps).evaluate()?.ratio(v_sum(pt).evaluate()?)
}

fn stable_r(p: &ProblemParams, pt: &Point, x: f64, t: f64) -> Result<f64> {
    s_sum(p, pt, x, t).evaluate()?.ratio(v_sum(pt).evaluate()?)
}

/// `u^ε(x, t)` from the stable region-wise expansion.
///
/// On a region boundary the direct quotient is used and the result is tagged
/// [`RegionTag::Boundary`].
pub fn u_eps_stable(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<Tagged> {
    let pt = Point::new(p, x, t, eps)?;
    match viscous_region(p, x, t) {
        Some(region) => Ok(Tagged { value: stable_u(p, &pt, eps)?, tag: RegionTag::Region(region) }),
        None => {
            let value = u_eps_naive(p, x, t, eps).or_else(|_| stable_u(p, &pt, eps))?;
            Ok(Tagged { value, tag: RegionTag::Boundary })
        }
    }
}

/// `R^ε(x, t)` from the stable region-wise expansion.
pub fn r_eps_stable(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<Tagged> {
    let pt = Point::new(p, x, t, eps)?;
    match viscous_region(p, x, t) {
        Some(region) => Ok(Tagged { value: stable_r(p, &pt, x, t)?, tag: RegionTag::Region(region) }),
        None => {
            let value = r_eps_naive(p, x, t, eps).or_else(|_| stable_r(p, &pt, x, t))?;
            Ok(Tagged { value, tag: RegionTag::Boundary })
        }
    }
}

/// Everything at one point: `V`, `S`, `u`, `R` and the region tag.
pub fn viscous_state(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<ViscousState> {
    let u = u_eps_stable(p, x, t, eps)?;
    let r = r_eps_stable(p, x, t, eps)?;
    Ok(ViscousState { v: v_eps(p, x, t, eps)?, s: s_eps(p, x, t, eps)?, u: u.value, r: r.value, tag: u.tag })
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("direct evaluation of {what} is not finite")))
    }
}

/// Smallest ratio `|V| / Σ|summands|` accepted from the direct evaluation
/// (at most six of the sixteen digits lost).
const NAIVE_CANCELLATION_LIMIT: f64 = 1e-6;

/// Direct evaluation of `√π·V` with plain exponentials.
fn naive_v_sqrt_pi(pt: &Point) -> Result<f64> {
    let terms = [
        pt.delta_e.exp() * erfc_paper(pt.w)?,
        erfc_paper(pt.zb)?,
        -erfc_paper(pt.za)?,
        (-pt.ub_over_eps).exp() * erfc_paper(-pt.zb)?,
    ];
    let v = finite(terms.iter().sum(), "V")?;
    if v <= 0.0 {
        return Err(Error::Overflow("direct evaluation of V underflowed to zero".into()));
    }
    let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
    if v < NAIVE_CANCELLATION_LIMIT * magnitude {
        return Err(Error::Cancellation(format!("direct V = {v:e} against summands of size {magnitude:e}")));
    }
    Ok(v)
}

/// `u^ε` as the direct global quotient `−εV_x/V` with plain exponentials.
///
/// Reference implementation only: overflows (reported as an error) whenever an
/// intermediate exponential leaves the `f64` range.
pub fn u_eps_naive(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<f64> {
    let pt = Point::new(p, x, t, eps)?;
    let v = naive_v_sqrt_pi(&pt)?;
    let n = p.u_a * pt.delta_e.exp() * erfc_paper(pt.w)?
        + eps / pt.s * (-pt.zb * pt.zb).exp() * (1.0 - (-pt.ub_over_eps).exp());
    finite(finite(n, "V_x")? / v, "u")
}

/// `R^ε` as the direct quotient `S/V` with plain exponentials.
pub fn r_eps_naive(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<f64> {
    let pt = Point::new(p, x, t, eps)?;
    let v = naive_v_sqrt_pi(&pt)?;
    let s = p.rho_c * (x - p.c - p.u_a * t) * pt.delta_e.exp() * erfc_paper(pt.w)?
        - p.rho_c * pt.s / 2.0 * (-pt.zc * pt.zc).exp()
        + p.rho_c * (x - p.c) * (erfc_paper(pt.zc)? - erfc_paper(pt.za)?)
        + p.rho_d * (-pt.ub_over_eps).exp() * erfc_paper(-pt.zd)?;
    finite(finite(s, "S")? / v, "R")
}

/// `ρ^ε = ∂_x R^ε` by a central difference with step `√(machine ε)·max(1, |x|)`.
pub fn rho_eps_fd(p: &ProblemParams, x: f64, t: f64, eps: f64) -> Result<f64> {
    let h = f64::EPSILON.sqrt() * x.abs().max(1.0);
    let hi = r_eps_stable(p, x + h, t, eps)?.value;
    let lo = r_eps_stable(p, x - h, t, eps)?.value;
    Ok((hi - lo) / (2.0 * h))
}
