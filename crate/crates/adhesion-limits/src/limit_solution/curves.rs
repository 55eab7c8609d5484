//! Wave curves, their piecewise assembly and the intersection times of each case.

use serde::Serialize;

use crate::problem::{CaseId, ProblemParams, SignCase, Subcase};

/// Closed-form shapes a curve piece can take.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CurveShape {
    /// `x = x0`.
    Constant { x0: f64 },
    /// `x = x0 + slope·t`.
    Line { x0: f64, slope: f64 },
    /// `x = x0 + sign·√(gamma·t)`.
    Root { x0: f64, sign: f64, gamma: f64 },
    /// `x = x0 + slope·t − √(gamma·t)`.
    ShiftedRoot { x0: f64, slope: f64, gamma: f64 },
}

impl CurveShape {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            CurveShape::Constant { x0 } => x0,
            CurveShape::Line { x0, slope } => x0 + slope * t,
            CurveShape::Root { x0, sign, gamma } => x0 + sign * (gamma * t).sqrt(),
            CurveShape::ShiftedRoot { x0, slope, gamma } => x0 + slope * t - (gamma * t).sqrt(),
        }
    }

    /// `dx/dt` for `t > 0`.
    pub fn speed(&self, t: f64) -> f64 {
        match *self {
            CurveShape::Constant { .. } => 0.0,
            CurveShape::Line { slope, .. } => slope,
            CurveShape::Root { sign, gamma, .. } => sign * 0.5 * (gamma / t).sqrt(),
            CurveShape::ShiftedRoot { slope, gamma, .. } => slope - 0.5 * (gamma / t).sqrt(),
        }
    }
}

/// Names of the curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CurveLabel {
    R,
    P,
    Q,
    L,
    LTilde,
    GammaA,
    GammaB,
    GammaC,
    GammaD,
    GammaA1,
    GammaA2,
    /// Right edge of the resting zone between `γ_c` and the fan from `b` in Case 4.
    GammaE,
    /// A vertical line `x = const` through one of the initial points.
    Foot(&'static str),
    /// A zone edge assembled from other curves, e.g. `max(b, γ_c)`.
    Edge(&'static str),
}

impl CurveLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveLabel::R => "r",
            CurveLabel::P => "p",
            CurveLabel::Q => "q",
            CurveLabel::L => "l",
            CurveLabel::LTilde => "l~",
            CurveLabel::GammaA => "gamma_a",
            CurveLabel::GammaB => "gamma_b",
            CurveLabel::GammaC => "gamma_c",
            CurveLabel::GammaD => "gamma_d",
            CurveLabel::GammaA1 => "gamma_a1",
            CurveLabel::GammaA2 => "gamma_a2",
            CurveLabel::GammaE => "gamma_e",
            CurveLabel::Foot(s) | CurveLabel::Edge(s) => s,
        }
    }
}

/// One analytic piece, active from `start` until the next piece starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePiece {
    pub start: f64,
    pub shape: CurveShape,
}

/// A piecewise-analytic map `t ↦ x` on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub label: CurveLabel,
    /// Pieces ordered by `start`; the first starts at `0`.
    pub pieces: Vec<CurvePiece>,
}

impl Curve {
    pub fn new(label: CurveLabel, shape: CurveShape) -> Self {
        Curve { label, pieces: vec![CurvePiece { start: 0.0, shape }] }
    }

    pub fn constant(label: CurveLabel, x0: f64) -> Self {
        Curve::new(label, CurveShape::Constant { x0 })
    }

    /// Same curve under another label.
    pub fn relabel(mut self, label: CurveLabel) -> Self {
        self.label = label;
        self
    }

    /// Follows `self` up to `t_switch` and `other` afterwards.
    ///
    /// A non-finite or negative switch time leaves `self` unchanged (the switch never happens).
    pub fn then(mut self, t_switch: f64, other: &Curve) -> Self {
        if !t_switch.is_finite() {
            return self;
        }
        let t_switch = t_switch.max(0.0);
        self.pieces.retain(|p| p.start < t_switch);
        let first = other.piece_index(t_switch);
        self.pieces.push(CurvePiece { start: t_switch, shape: other.pieces[first].shape });
        self.pieces.extend(other.pieces[first + 1..].iter().copied());
        self
    }

    fn piece_index(&self, t: f64) -> usize {
        self.pieces.iter().rposition(|p| p.start <= t).unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.pieces[self.piece_index(t)].shape.eval(t)
    }

    /// Value of the piece active just before `t` (equal to [`Curve::eval`] except at switch times).
    pub fn eval_left(&self, t: f64) -> f64 {
        let i = self.pieces.iter().rposition(|p| p.start < t).unwrap_or(0);
        self.pieces[i].shape.eval(t)
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.pieces[self.piece_index(t)].shape.speed(t)
    }

    /// Times (`> 0`) at which the active piece changes.
    pub fn switch_times(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.start).collect()
    }

    /// Largest relative jump `|left − right| / max(1, |x|)` over all switch times.
    pub fn max_continuity_defect(&self) -> f64 {
        self.switch_times()
            .into_iter()
            .map(|t| {
                let (l, r) = (self.eval_left(t), self.eval(t));
                (l - r).abs() / l.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// A closed-form intersection time together with the two curves that meet there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionTime {
    /// Name such as `"t_{p,l}"`.
    pub name: &'static str,
    pub t: f64,
    pub first: Curve,
    pub second: Curve,
}

impl IntersectionTime {
    /// Location of the meeting point (evaluated on the first curve).
    pub fn x(&self) -> f64 {
        self.first.eval(self.t)
    }

    /// `|first(t) − second(t)| / max(1, |first(t)|)`.
    pub fn relative_gap(&self) -> f64 {
        let (x1, x2) = (self.first.eval(self.t), self.second.eval(self.t));
        (x1 - x2).abs() / x1.abs().max(1.0)
    }
}

/// Whether the curve network of a configuration is the one worked out in detail
/// or was assembled by the same intersection-ordering pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Completeness {
    Detailed,
    ExtrapolatedFromProofPattern { reason: String },
}

impl Completeness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Completeness::Detailed => "detailed",
            Completeness::ExtrapolatedFromProofPattern { .. } => "extrapolated-from-proof-pattern",
        }
    }

    pub fn is_detailed(&self) -> bool {
        matches!(self, Completeness::Detailed)
    }
}

/// All curves of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSet {
    pub case: SignCase,
    /// The named curves of the case.
    pub curves: Vec<Curve>,
    /// The six zone edges, left to right (see [`crate::limit_solution::Zone`]).
    pub edges: [Curve; 6],
    pub intersections: Vec<IntersectionTime>,
    pub completeness: Completeness,
    /// `x` coordinate where `p` meets `r` (Cases 2 and 3).
    pub x_pr: Option<f64>,
    /// `x` coordinate where `p` meets `l` (Case 2).
    pub x_pl: Option<f64>,
}

impl CurveSet {
    pub fn get(&self, label: CurveLabel) -> Option<&Curve> {
        self.curves.iter().find(|c| c.label == label)
    }

    /// Sorted, deduplicated switch times of all edges and the named curves.
    pub fn breakpoint_times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self
            .edges
            .iter()
            .chain(self.curves.iter())
            .flat_map(|c| c.switch_times())
            .chain(self.intersections.iter().map(|i| i.t))
            .filter(|t| t.is_finite() && *t > 0.0)
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        ts
    }

    /// Edge positions at time `t`.
    pub fn edge_positions(&self, t: f64) -> [f64; 6] {
        std::array::from_fn(|i| self.edges[i].eval(t))
    }
}

fn line(label: CurveLabel, x0: f64, slope: f64) -> Curve {
    Curve::new(label, CurveShape::Line { x0, slope })
}

fn root(label: CurveLabel, x0: f64, sign: f64, gamma: f64) -> Curve {
    Curve::new(label, CurveShape::Root { x0, sign, gamma })
}

fn meet(name: &'static str, t: f64, first: &Curve, second: &Curve) -> IntersectionTime {
    IntersectionTime { name, t, first: first.clone(), second: second.clone() }
}

/// Builds the curves, zone edges and intersection times for validated parameters.
///
/// `case` must be the classification of `p`.
pub fn build_curves(p: &ProblemParams, case: SignCase) -> CurveSet {
    match case.case_id {
        CaseId::Case1 => case1(p, case),
        CaseId::Case2 => case2(p, case),
        CaseId::Case3 => case3(p, case),
        CaseId::Case4 => case4(p, case),
    }
}

fn feet(p: &ProblemParams) -> [Curve; 4] {
    [
        Curve::constant(CurveLabel::Foot("a"), p.a),
        Curve::constant(CurveLabel::Foot("c"), p.c),
        Curve::constant(CurveLabel::Foot("b"), p.b),
        Curve::constant(CurveLabel::Foot("d"), p.d),
    ]
}

fn case1(p: &ProblemParams, case: SignCase) -> CurveSet {
    let [fa, fc, fb, fd] = feet(p);
    let r = line(CurveLabel::R, p.a, p.u_a);
    let pc = root(CurveLabel::P, p.b, 1.0, 2.0 * p.u_b);
    let t_star = (p.d - p.b).powi(2) / (2.0 * p.u_b);
    let gd = fd.clone().relabel(CurveLabel::GammaD).then(t_star, &pc);
    CurveSet {
        case,
        edges: [r.clone(), fa, fc, fb, pc.clone(), gd.clone()],
        intersections: vec![meet("t*", t_star, &pc, &fd)],
        curves: vec![r, pc, gd],
        completeness: Completeness::Detailed,
        x_pr: None,
        x_pl: None,
    }
}

fn case2(p: &ProblemParams, case: SignCase) -> CurveSet {
    let [_, fc, fb, fd] = feet(p);
    let (ua, ub) = (p.u_a, p.u_b);
    let l = line(CurveLabel::L, p.a + ub / ua, ua / 2.0);
    let lt = line(CurveLabel::LTilde, p.a, ua / 2.0);
    let r = line(CurveLabel::R, p.a, ua);
    let pc = root(CurveLabel::P, p.b, 1.0, 2.0 * ub);
    let q = Curve::new(CurveLabel::Q, CurveShape::ShiftedRoot { x0: p.b, slope: ua, gamma: 2.0 * ua * (p.b - p.a) });

    let t_lb = 2.0 * (p.b - p.a) / ua;
    let t_pl = (((2.0 * ub).sqrt() + (2.0 * ua * (p.b - p.a)).sqrt()) / ua).powi(2);
    let t_lc = 2.0 * (p.c - p.a) / ua;
    let t_star = (p.d - p.b).powi(2) / (2.0 * ub);
    let t_ld = 2.0 * (p.d - p.a - ub / ua) / ua;
    let sqrt_t_pr = ((2.0 * ub).sqrt() + (2.0 * ub + 4.0 * ua * (p.b - p.a)).sqrt()) / (2.0 * ua);
    let x_pr = r.eval(sqrt_t_pr * sqrt_t_pr);
    let x_pl = pc.eval(t_pl);

    let ga = lt.clone().relabel(CurveLabel::GammaA).then(t_lb, &q).then(t_pl, &l);
    let gb = pc.clone().relabel(CurveLabel::GammaB).then(t_pl, &l);
    let gc = fc.clone().relabel(CurveLabel::GammaC).then(t_lc, &ga);
    let t_dmeet = if t_star <= t_pl { t_star } else { t_ld };
    let gd = fd.clone().relabel(CurveLabel::GammaD).then(t_dmeet, &gb);
    let rest_edge = fb.clone().relabel(CurveLabel::Edge("max(b,gamma_c)")).then(t_lb, &gc);

    let detailed = case.subcase == Subcase::Case2Strong && x_pr < p.d && p.d < x_pl;
    let completeness = if detailed {
        Completeness::Detailed
    } else {
        Completeness::ExtrapolatedFromProofPattern {
            reason: format!(
                "only 2u_b < u_a(b-a) with x_pr < d < x_pl is worked out in detail (subcase {}, x_pr = {x_pr}, d = {}, x_pl = {x_pl})",
                case.subcase.as_str(),
                p.d
            ),
        }
    };

    let mut intersections = vec![
        meet("t_{p,l}", t_pl, &pc, &l),
        meet("t_{q,l}", t_pl, &q, &l),
        meet("t_{l~,b}", t_lb, &lt, &fb),
        meet("t_{l~,b}", t_lb, &q, &fb),
        meet("t_{l~,c}", t_lc, &lt, &fc),
        meet("t_{p,r}", sqrt_t_pr * sqrt_t_pr, &pc, &r),
        meet("t*", t_star, &pc, &fd),
    ];
    if t_ld > 0.0 {
        intersections.push(meet("t_{l,d}", t_ld, &l, &fd));
    }
    CurveSet {
        case,
        edges: [ga.clone(), ga.clone(), gc.clone(), rest_edge, gb.clone(), gd.clone()],
        intersections,
        curves: vec![l, lt, r, pc, q, ga, gb, gc, gd],
        completeness,
        x_pr: Some(x_pr),
        x_pl: Some(x_pl),
    }
}

fn case3(p: &ProblemParams, case: SignCase) -> CurveSet {
    let [_, fc, fb, fd] = feet(p);
    let (ua, ub) = (p.u_a, p.u_b);
    let k = ua * (p.b - p.a) - ub;
    let l = line(CurveLabel::L, p.a + ub / ua, ua / 2.0);
    let lt = line(CurveLabel::LTilde, p.a, ua / 2.0);
    let r = line(CurveLabel::R, p.a, ua);
    let pc = root(CurveLabel::P, p.b, -1.0, -2.0 * ub);
    let q = Curve::new(CurveLabel::Q, CurveShape::ShiftedRoot { x0: p.b, slope: ua, gamma: 2.0 * k });

    // p, q and l~ meet at one point.
    let t_pq = (((2.0 * k).sqrt() - (-2.0 * ub).sqrt()) / ua).powi(2);
    // q touches l tangentially at x = b.
    let t_ql = 2.0 * k / (ua * ua);
    let t_pc = (p.b - p.c).powi(2) / (-2.0 * ub);
    let t_lc = 2.0 * (p.c - p.a) / ua;
    let t_ld = 2.0 * (p.d - p.a - ub / ua) / ua;
    // The closed form printed for t_{q,l~}; it is the time at which p meets r.
    let t_pr = (((2.0 * (2.0 * ua * (p.b - p.a) - ub)).sqrt() - (-2.0 * ub).sqrt()) / (2.0 * ua)).powi(2);
    let x_pr = r.eval(t_pr);

    let ga = lt.clone().relabel(CurveLabel::GammaA).then(t_pq, &q).then(t_ql, &l);
    let gb = pc.clone().relabel(CurveLabel::GammaB).then(t_pq, &ga);
    let gc = if t_pc < t_pq {
        fc.clone().relabel(CurveLabel::GammaC).then(t_pc, &gb)
    } else {
        fc.clone().relabel(CurveLabel::GammaC).then(t_lc, &ga)
    };
    let gd = fd.clone().relabel(CurveLabel::GammaD).then(t_ld, &l);
    let fan_edge = fb.clone().relabel(CurveLabel::Edge("max(b,gamma_b)")).then(t_ql, &l);

    let detailed = case.subcase == Subcase::Case3Small && p.c > x_pr;
    let completeness = if detailed {
        Completeness::Detailed
    } else {
        Completeness::ExtrapolatedFromProofPattern {
            reason: format!(
                "only |u_b| < u_a(b-a) with c > x_pr is worked out in detail (subcase {}, c = {}, x_pr = {x_pr})",
                case.subcase.as_str(),
                p.c
            ),
        }
    };
    let mut intersections = vec![
        meet("t_{q,l~}", t_pq, &q, &lt),
        meet("t_{p,q}", t_pq, &pc, &q),
        meet("t_{q,l}", t_ql, &q, &l),
        meet("t_{q,l}", t_ql, &q, &fb),
        meet("t_{p,r}", t_pr, &pc, &r),
        meet("t_{l,d}", t_ld, &l, &fd),
    ];
    if t_pc < t_pq {
        intersections.push(meet("t_{p,c}", t_pc, &pc, &fc));
    } else {
        intersections.push(meet("t_{l~,c}", t_lc, &lt, &fc));
    }
    CurveSet {
        case,
        edges: [ga.clone(), ga.clone(), gc.clone(), gb.clone(), fan_edge, gd.clone()],
        intersections,
        curves: vec![l, lt, r, pc, q, ga, gb, gc, gd],
        completeness,
        x_pr: Some(x_pr),
        x_pl: None,
    }
}

fn case4(p: &ProblemParams, case: SignCase) -> CurveSet {
    let [fa, fc, fb, fd] = feet(p);
    let (ua, ub) = (p.u_a, p.u_b);
    let k = ua * (p.b - p.a) - ub;
    let l = line(CurveLabel::L, 0.5 * (p.a + p.b), ub / (p.b - p.a));
    let r = line(CurveLabel::R, p.a, ua);
    let pc = root(CurveLabel::P, p.b, -1.0, -2.0 * ub);
    let q = (k > 0.0).then(|| Curve::new(CurveLabel::Q, CurveShape::ShiftedRoot { x0: p.b, slope: ua, gamma: 2.0 * k }));

    let t_al = (p.b - p.a).powi(2) / (-2.0 * ub);
    let t_cp = (p.b - p.c).powi(2) / (-2.0 * ub);
    let t_rq = if k > 0.0 { (p.b - p.a).powi(2) / (2.0 * k) } else { f64::INFINITY };

    let mut ga1 = r.clone().relabel(CurveLabel::GammaA1);
    let mut ga2 = fa.clone().relabel(CurveLabel::GammaA2).then(t_al, &l);
    let mut gc = fc.clone().relabel(CurveLabel::GammaC).then(t_cp, &pc).then(t_al, &l);
    if let Some(q) = &q {
        ga1 = ga1.then(t_rq, q);
        ga2 = ga2.then(t_rq, q);
        gc = gc.then(t_rq, q);
    }
    let ge = pc.clone().relabel(CurveLabel::GammaE).then(t_al, &gc);
    let gd = fd.clone().relabel(CurveLabel::GammaD);

    let mut intersections = vec![
        meet("t_{a,l}", t_al, &l, &fa),
        meet("t_{a,l}", t_al, &pc, &fa),
        meet("t_{c,p}", t_cp, &pc, &fc),
    ];
    let mut curves = vec![l.clone(), r.clone(), pc.clone()];
    if let Some(q) = q {
        intersections.push(meet("t_{r,q}", t_rq, &r, &q));
        intersections.push(meet("t_{l,q}", t_rq, &l, &q));
        curves.push(q);
    }
    curves.extend([ga1.clone(), ga2.clone(), gc.clone(), ge.clone(), gd.clone()]);
    CurveSet {
        case,
        edges: [ga1, ga2, gc, ge, fb, fd],
        intersections,
        curves,
        completeness: Completeness::Detailed,
        x_pr: None,
        x_pl: None,
    }
}
