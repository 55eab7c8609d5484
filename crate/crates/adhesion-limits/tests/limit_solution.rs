mod common;

use adhesion_limits::limit_solution::{
    build_curves, displayed_u_clauses, probe_points, r_limit, u_limit, verify_limit_convergence, Completeness,
    ConvergenceTolerances, CurveLabel, Fidelity, LimitSolution, Zone, BOUNDARY_LABEL,
};
use adhesion_limits::{classify_case, CaseId, Error, ProblemParams, Subcase};
use common::{all_subcases, base, variational};
use proptest::prelude::*;

fn sol(p: ProblemParams) -> LimitSolution {
    LimitSolution::new(p, Fidelity::Corrected)
}

#[test]
fn case1_curves_and_switch_time() {
    let s = sol(base(-1.0, 1.0));
    let mut labels: Vec<&str> = s.curves.curves.iter().map(|c| c.label.as_str()).collect();
    labels.sort();
    assert_eq!(labels, ["gamma_d", "p", "r"]);
    let gd = s.curves.get(CurveLabel::GammaD).unwrap();
    assert_eq!(gd.switch_times(), vec![0.5]);
    assert_eq!(gd.eval(0.25), 3.0);
    assert!((gd.eval(1.0) - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    assert!((s.curves.get(CurveLabel::P).unwrap().eval(1.0) - 3.414_213_562_373_095).abs() < 1e-15);
}

#[test]
fn case2_intersection_of_p_and_l() {
    let s = sol(base(1.0, 1.0));
    let i = s.curves.intersections.iter().find(|i| i.name == "t_{p,l}").unwrap();
    let want_t = (2f64.sqrt() + 2.0).powi(2);
    assert!((i.t - want_t).abs() < 1e-12 * want_t);
    assert!((i.x() - 6.828_427_124_746_19).abs() < 1e-12);
    assert!(i.relative_gap() < 1e-12);
}

#[test]
fn case2_gamma_a_is_continuous_at_b() {
    let s = sol(base(1.0, 1.0));
    let g = s.curves.get(CurveLabel::GammaA).unwrap();
    let t = 2.0 * (s.params.b - s.params.a) / s.params.u_a;
    assert!((g.eval_left(t) - s.params.b).abs() < 1e-14);
    assert!((g.eval(t) - s.params.b).abs() < 1e-14);
}

#[test]
fn case1_limit_values() {
    let p = base(-1.0, 1.0);
    assert_eq!(u_limit(&p, -2.0, 1.0).value, Some(-1.0));
    assert_eq!(u_limit(&p, -2.0, 1.0).label(), "left-constant");
    assert_eq!(u_limit(&p, -0.5, 1.0).value, Some(-0.5));
    assert_eq!(u_limit(&p, 2.5, 1.0).value, Some(0.5));
    assert_eq!(u_limit(&p, 4.0, 1.0).value, Some(0.0));
    assert_eq!(r_limit(&p, -3.0, 1.0).value, Some(-3.0));
    assert_eq!(r_limit(&p, 1.5, 0.1).value, Some(0.0));
    let z = p.without_density();
    for x in [-3.0, -0.5, 0.5, 2.5, 5.0] {
        assert_eq!(r_limit(&z, x, 1.0).value, Some(0.0));
    }
}

#[test]
fn boundary_points_carry_no_value() {
    let p = base(-1.0, 1.0);
    for x in [p.a - 1.0, p.a, p.c, p.b, 2.0 + 2f64.sqrt()] {
        let v = u_limit(&p, x, 1.0);
        assert_eq!(v.value, None);
        assert_eq!(v.label(), BOUNDARY_LABEL);
    }
}

#[test]
fn convergence_examples() {
    let eps: Vec<f64> = (1..=4).map(|k| 10f64.powi(-k)).collect();
    let tol = ConvergenceTolerances::default();
    let r = verify_limit_convergence(&sol(base(-1.0, 1.0)), &[(-3.0, 1.0)], &eps, tol).unwrap();
    let e = &r.points[0].u_errors;
    assert!(e.windows(2).all(|w| w[1] <= w[0]) && *e.last().unwrap() < 0.01);
    assert!(r.pass);
    let r = verify_limit_convergence(&sol(base(1.0, 1.0)), &[(0.2, 1.0)], &eps, tol).unwrap();
    assert_eq!(r.points[0].u_limit, 1.0);
    assert!(r.pass);
    let r = verify_limit_convergence(&sol(base(-1.0, -1.0)), &[(2.5, 1.0)], &eps, tol).unwrap();
    assert_eq!((r.points[0].u_limit, r.points[0].r_limit), (0.0, 0.0));
    assert!(r.pass);
}

#[test]
fn convergence_rejects_points_near_edges() {
    let s = sol(base(-1.0, 1.0));
    let err = verify_limit_convergence(&s, &[(-0.95, 1.0)], &[0.1], ConvergenceTolerances::default()).unwrap_err();
    assert!(matches!(err, Error::NearBoundary { .. }));
}

#[test]
fn every_curve_starts_at_its_foot() {
    for (_, p) in all_subcases() {
        let s = sol(p);
        for (label, foot) in [
            (CurveLabel::R, p.a),
            (CurveLabel::P, p.b),
            (CurveLabel::Q, p.b),
            (CurveLabel::GammaC, p.c),
            (CurveLabel::GammaD, p.d),
        ] {
            if let Some(c) = s.curves.get(label) {
                assert_eq!(c.eval(0.0), foot, "{} in {:?}", label.as_str(), s.case);
            }
        }
    }
}

#[test]
fn curves_are_continuous_and_intersections_exact() {
    for (_, p) in all_subcases() {
        let s = sol(p);
        for c in s.curves.curves.iter().chain(s.curves.edges.iter()) {
            assert!(c.max_continuity_defect() <= 1e-12, "{} in {:?}", c.label.as_str(), s.case);
        }
        for i in &s.curves.intersections {
            assert!(i.t.is_finite() && i.t >= 0.0);
            assert!(i.relative_gap() <= 1e-10, "{} in {:?}", i.name, s.case);
        }
    }
}

#[test]
fn edges_are_ordered() {
    for (_, p) in all_subcases() {
        let s = sol(p);
        for k in 1..400 {
            let t = 0.05 * k as f64;
            let e = s.layout(t);
            assert!(e.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{:?} at t = {t}: {e:?}", s.case);
        }
    }
}

#[test]
fn completeness_flags() {
    assert!(sol(base(-1.0, 1.0)).curves.completeness.is_detailed());
    assert!(sol(base(1.0, -1.0)).curves.completeness.is_detailed());
    assert!(sol(base(-1.0, -1.0)).curves.completeness.is_detailed());
    let middle = sol(base(1.0, 1.0));
    assert_eq!(middle.curves.completeness.as_str(), "extrapolated-from-proof-pattern");
    // Strong Case 2 is detailed only for x_pr < d < x_pl; here x_pr = 4, x_pl = 5.
    let strong = ProblemParams::new(0.0, 1.0, 2.0, 4.5, 1.0, 0.5, 1.0, 2.0).unwrap();
    let s = sol(strong);
    assert_eq!((s.curves.x_pr, s.curves.x_pl), (Some(4.0), Some(5.0)));
    assert_eq!(s.curves.completeness, Completeness::Detailed);
    assert!(!sol(base(1.0, 0.5)).curves.completeness.is_detailed());
    assert!(!sol(base(1.0, -3.0)).curves.completeness.is_detailed());
}

#[test]
fn zone_labels_are_stable() {
    let labels: Vec<&str> = Zone::ALL.iter().map(|z| z.label()).collect();
    assert_eq!(labels, ["left-constant", "fan-a", "rest-dense", "rest", "fan-b", "right-rest", "right-dense"]);
    assert_eq!(Fidelity::parse("as-printed"), Some(Fidelity::AsPrinted));
    assert_eq!(Fidelity::AsPrintedDroppedConstants.as_str(), "as-printed-dropped-constants");
    assert_eq!(Fidelity::parse("other"), None);
}

#[test]
fn printed_fan_density_differs_from_corrected() {
    let p = base(-1.0, 1.0);
    let printed = LimitSolution::new(p, Fidelity::AsPrinted);
    let corrected = sol(p);
    let (x, t) = (-0.5, 1.0);
    assert_eq!(corrected.r(x, t).value, Some(p.rho_c * (p.a - p.c)));
    // ρ_c(2(x−a−u_a t)(x−a) + (a−c)u_a t)/(u_a t).
    let want = p.rho_c * (2.0 * (x - p.a - p.u_a * t) * (x - p.a) + (p.a - p.c) * p.u_a * t) / (p.u_a * t);
    assert!((printed.r(x, t).value.unwrap() - want).abs() < 1e-15);
    assert_eq!(printed.u(x, t), corrected.u(x, t));
}

#[test]
fn probe_points_keep_their_margin() {
    for (_, p) in all_subcases() {
        let s = sol(p);
        let pts = probe_points(&s, &[0.5, 1.0, 2.0, 4.0], (p.a - 5.0, p.d + 5.0), 0.1);
        assert!(!pts.is_empty());
        for (x, t, z) in pts {
            assert!(s.distance_to_boundary(x, t) >= 0.1);
            assert_eq!(s.zone_at(x, t), Some(z));
        }
    }
}

#[test]
fn acceptance_style_convergence_for_every_subcase() {
    let eps: Vec<f64> = (1..=4).map(|k| 10f64.powi(-k)).collect();
    for (name, p) in all_subcases() {
        let s = sol(p);
        let times: Vec<f64> = (1..=11).map(|k| 5.0 * k as f64 / 11.0).collect();
        let pts: Vec<(f64, f64)> =
            probe_points(&s, &times, (p.a - 5.0, p.d + 5.0), 0.1).into_iter().map(|(x, t, _)| (x, t)).collect();
        let r = verify_limit_convergence(&s, &pts, &eps, ConvergenceTolerances::default()).unwrap();
        let bad: Vec<_> = r.points.iter().filter(|p| !p.pass).map(|p| (p.x, p.t, p.zone)).collect();
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

fn params_strategy() -> impl Strategy<Value = ProblemParams> {
    (
        -2.0f64..2.0,
        0.2f64..1.5,
        0.2f64..1.5,
        0.2f64..1.5,
        prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
        prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
        -2.0f64..2.0,
        0.1f64..3.0,
    )
        .prop_map(|(a, g1, g2, g3, u_a, u_b, rc, rd)| {
            ProblemParams::new(a, a + g1, a + g1 + g2, a + g1 + g2 + g3, u_a, u_b, rc, rd).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Away from shocks the limit fields equal the Hopf–Lax minimizer state.
    #[test]
    fn fields_match_variational_oracle(p in params_strategy(), sx in 0.0f64..1.0, t in 0.01f64..12.0) {
        let s = sol(p);
        let x = p.a - 6.0 + sx * (p.d - p.a + 12.0);
        let v = variational(&p, x, t);
        if v.gap > 1e-7 && s.distance_to_boundary(x, t) > 1e-7 {
            let u = s.u(x, t).value.unwrap();
            let r = s.r(x, t).value.unwrap();
            prop_assert!((u - v.u).abs() <= 1e-9 * v.u.abs().max(1.0), "{:?} u({x}, {t}) = {u}, oracle {}", s.case, v.u);
            prop_assert!((r - v.r).abs() <= 1e-9 * v.r.abs().max(1.0), "{:?} R({x}, {t}) = {r}, oracle {}", s.case, v.r);
        }
    }

    /// Interior points belong to exactly one zone, and exactly one displayed
    /// clause of the `u` formula fires there, with the same value.
    #[test]
    fn partition_and_display_agree(p in params_strategy(), sx in 0.0f64..1.0, t in 0.01f64..12.0) {
        let s = sol(p);
        let x = p.a - 6.0 + sx * (p.d - p.a + 12.0);
        if s.distance_to_boundary(x, t) > 1e-7 && variational(&p, x, t).gap > 1e-7 {
            let zones: Vec<Zone> = Zone::ALL.iter().copied().filter(|&z| {
                let (lo, hi) = s.zone_interval(z, t);
                x > lo && x < hi
            }).collect();
            prop_assert_eq!(zones.len(), 1);
            let clauses = displayed_u_clauses(&p, x, t);
            prop_assert_eq!(clauses.len(), 1, "{:?} at ({}, {}): {:?}", s.case, x, t, clauses);
            prop_assert!((clauses[0].value - s.u(x, t).value.unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn random_curves_are_continuous(p in params_strategy()) {
        let set = build_curves(&p, classify_case(&p));
        for c in set.curves.iter().chain(set.edges.iter()) {
            prop_assert!(c.max_continuity_defect() <= 1e-12, "{}", c.label.as_str());
        }
        for i in &set.intersections {
            prop_assert!(i.relative_gap() <= 1e-10, "{}", i.name);
        }
    }

    #[test]
    fn fan_zones_carry_the_fan_velocity(p in params_strategy(), t in 0.1f64..5.0) {
        let s = sol(p);
        for z in [Zone::FanA, Zone::FanB] {
            let (lo, hi) = s.zone_interval(z, t);
            if hi > lo + 1e-6 {
                let x = 0.5 * (lo + hi);
                let foot = if z == Zone::FanA { p.a } else { p.b };
                prop_assert!((s.zone_u(z, x, t) - (x - foot) / t).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn case_specific_structure() {
    let s = sol(base(-1.0, -1.0));
    assert_eq!(s.case.case_id, CaseId::Case4);
    assert_eq!(s.case.subcase, Subcase::Case4AtMost);
    assert!(s.curves.get(CurveLabel::GammaA2).is_some());
    let s = sol(base(1.0, -1.0));
    assert!(s.curves.get(CurveLabel::L).is_some() && s.curves.get(CurveLabel::LTilde).is_some());
}
