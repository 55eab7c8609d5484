mod common;

use adhesion_limits::oracle_quadrature::{s_quad, v_quad};
use adhesion_limits::problem::scaled_args;
use adhesion_limits::special_fn::erfc_scaled;
use adhesion_limits::viscous_exact::{
    r_eps_naive, r_eps_stable, rho_eps_fd, s_eps, s_eps_magnitude, u_eps_naive, u_eps_stable, v_eps, viscous_region,
    viscous_state, RegionTag, Scaled,
};
use adhesion_limits::{Error, ProblemParams};
use common::{base, canonical, rel};
use proptest::prelude::*;

// Direct mpmath quadrature (40 digits) of the heat-kernel integrals for
// (a, c, b, d) = (0, 1, 2, 3), u_a = −1, u_b = 1, ρ_c = 1, ρ_d = 2.
const V_05_1_1: f64 = 0.830_833_057_093_513_565_91;
const S_05_1_1: f64 = -0.448_158_571_008_824_692_26;
const V_M05_05_05: f64 = 0.461_920_335_930_273_554_51;
const S_M05_05_05: f64 = -0.541_439_287_911_679_743_14;
const R_35_01_005: f64 = 1.999_999_999_998_462_540_2;
const V_25_1_01: f64 = 0.056_965_964_626_124_530_844;
const S_25_1_01: f64 = 5.103_734_113_900_109_259_3e-6;
// At (x, t, ε) = (−3, 1, 0.01) the tilted Gaussian sits entirely in y < a with
// mean −2, so V = e^{−250} and S = (−2 − c)·e^{−250} up to terms below e^{−450}.
const V_M3_1_001: f64 = 2.669_190_215_541_276_393_5e-109;
const S_M3_1_001: f64 = -8.007_570_646_623_829_180_5e-109;

fn case1() -> ProblemParams {
    base(-1.0, 1.0)
}

fn val(s: Scaled) -> f64 {
    s.to_f64().unwrap()
}

#[test]
fn closed_forms_match_high_precision_values() {
    let p = case1();
    assert!(rel(val(v_eps(&p, 0.5, 1.0, 1.0).unwrap()), V_05_1_1) < 1e-13);
    assert!(rel(val(s_eps(&p, 0.5, 1.0, 1.0).unwrap()), S_05_1_1) < 1e-13);
    assert!(rel(val(v_eps(&p, -0.5, 0.5, 0.5).unwrap()), V_M05_05_05) < 1e-13);
    assert!(rel(val(s_eps(&p, -0.5, 0.5, 0.5).unwrap()), S_M05_05_05) < 1e-13);
    assert!(rel(val(v_eps(&p, 2.5, 1.0, 0.1).unwrap()), V_25_1_01) < 1e-13);
    let s = val(s_eps(&p, 2.5, 1.0, 0.1).unwrap());
    assert!((s - S_25_1_01).abs() < 1e-13, "{s}");
    let v = val(v_eps(&p, -3.0, 1.0, 0.01).unwrap());
    let s = val(s_eps(&p, -3.0, 1.0, 0.01).unwrap());
    assert!(((v - V_M3_1_001) / V_M3_1_001).abs() < 1e-12, "{v}");
    assert!(((s - S_M3_1_001) / S_M3_1_001).abs() < 1e-12, "{s}");
}

#[test]
fn quotient_matches_direct_ratio() {
    let p = case1();
    let r = r_eps_stable(&p, 3.5, 0.1, 0.05).unwrap().value;
    let q = val(s_eps(&p, 3.5, 0.1, 0.05).unwrap()) / val(v_eps(&p, 3.5, 0.1, 0.05).unwrap());
    assert!(rel(r, q) < 1e-9);
    assert!(rel(r, R_35_01_005) < 1e-9);
}

#[test]
fn closed_form_matches_quadrature_oracle_at_examples() {
    let p = case1();
    let v = v_eps(&p, 0.5, 1.0, 1.0).unwrap();
    let q = v_quad(&p, 0.5, 1.0, 1.0, 1e-12).unwrap();
    assert!(v.relative_difference(q.value, q.value) <= 1e-8);
    let s = s_eps(&p, -0.5, 0.5, 0.5).unwrap();
    let q = s_quad(&p, -0.5, 0.5, 0.5, 1e-12).unwrap();
    assert!(s.relative_difference(q.value, q.value) <= 1e-8);
}

#[test]
fn v_tends_to_one_inside_a_b() {
    for (_, p) in canonical() {
        let v = val(v_eps(&p, 0.5 * (p.a + p.b), 1e-6, 0.5).unwrap());
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn s_tends_to_zero_inside_c_d() {
    for (_, p) in canonical() {
        for x in [1.5, 2.5] {
            assert!(val(s_eps(&p, x, 1e-6, 0.5).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn v_does_not_depend_on_density() {
    let p = case1();
    let q = ProblemParams { rho_c: 7.0, rho_d: -3.0, ..p };
    for x in [-2.0, 0.3, 2.2, 4.0] {
        assert_eq!(v_eps(&p, x, 0.7, 0.2).unwrap(), v_eps(&q, x, 0.7, 0.2).unwrap());
    }
}

#[test]
fn zero_density_gives_zero_s_and_r() {
    let p = case1().without_density();
    for x in [-2.0, 0.3, 1.0, 2.2, 4.0] {
        assert_eq!(val(s_eps(&p, x, 0.7, 0.2).unwrap()), 0.0);
        assert_eq!(r_eps_stable(&p, x, 0.7, 0.2).unwrap().value, 0.0);
    }
}

#[test]
fn case1_left_state_is_approached() {
    let p = case1();
    assert!((u_eps_stable(&p, -3.0, 1.0, 0.01).unwrap().value + 1.0).abs() < 0.01);
    assert!((r_eps_stable(&p, -3.0, 1.0, 1e-3).unwrap().value + 3.0).abs() < 0.05);
}

#[test]
fn paths_agree_next_to_b() {
    for (_, p) in canonical() {
        for x in [p.b - 1e-6, p.b + 1e-6] {
            let s = u_eps_stable(&p, x, 1.0, 0.5).unwrap().value;
            let n = u_eps_naive(&p, x, 1.0, 0.5).unwrap();
            assert!(rel(s, n) <= 1e-9, "{s} vs {n}");
        }
    }
}

#[test]
fn velocity_bound_at_midpoint() {
    for (_, p) in canonical() {
        let x = 0.5 * (p.a + p.b);
        for t in [5.0, 20.0, 50.0] {
            let bound = p.u_a.abs().max(((x - p.b) / t).abs()).max(((x - p.a) / t).abs()) + 1.0;
            for k in 0..40 {
                let eps = 10f64.powf(-4.0 + 0.125 * k as f64);
                assert!(u_eps_stable(&p, x, t, eps).unwrap().value.abs() <= bound);
            }
        }
    }
}

#[test]
fn naive_path_overflows_where_stable_path_does_not() {
    let p = case1();
    assert!(matches!(u_eps_naive(&p, -3.0, 1.0, 1e-4), Err(Error::Overflow(_))));
    let u = u_eps_stable(&p, -3.0, 1.0, 1e-4).unwrap().value;
    assert!((u + 1.0).abs() < 1e-6);
}

#[test]
fn boundary_point_with_cancelling_erfc_pair() {
    // x = a + u_a t with V ≈ e^{−250}: the direct sum would subtract two copies of √π.
    let p = case1();
    assert!(matches!(u_eps_naive(&p, -5.0, 5.0, 0.01), Err(Error::Cancellation(_))));
    let on = u_eps_stable(&p, -5.0, 5.0, 0.01).unwrap();
    assert_eq!(on.tag, RegionTag::Boundary);
    for x in [-5.0 - 1e-9, -5.0 + 1e-9] {
        let near = u_eps_stable(&p, x, 5.0, 0.01).unwrap().value;
        assert!((on.value - near).abs() < 1e-6, "{} vs {near}", on.value);
    }
}

#[test]
fn naive_path_finite_at_moderate_viscosity() {
    let p = case1();
    assert!(u_eps_naive(&p, 1.0, 1.0, 1.0).unwrap().is_finite());
    assert!(r_eps_naive(&p, 1.0, 1.0, 1.0).unwrap().is_finite());
}

#[test]
fn boundary_points_are_tagged() {
    let p = case1();
    for x in [p.a, p.c, p.b, p.d, p.a + p.u_a * 1.0] {
        assert!(viscous_region(&p, x, 1.0).is_none());
        let u = u_eps_stable(&p, x, 1.0, 0.3).unwrap();
        assert_eq!(u.tag, RegionTag::Boundary);
        assert_eq!(u.tag.label(), "boundary");
        assert!(u.value.is_finite());
    }
    let st = viscous_state(&p, 0.5, 1.0, 0.3).unwrap();
    assert_eq!(st.tag.label(), "a<x<c|x>a+u_a*t");
}

#[test]
fn density_finite_difference_matches_wider_stencil() {
    let p = case1();
    for x in [-1.5, 0.5, 2.5, 3.5] {
        let fd = rho_eps_fd(&p, x, 1.0, 0.5).unwrap();
        let h = 1e-4;
        let r = |y: f64| r_eps_stable(&p, y, 1.0, 0.5).unwrap().value;
        let wide = (r(x + h) - r(x - h)) / (2.0 * h);
        assert!((fd - wide).abs() < 1e-6 * wide.abs().max(1.0), "x = {x}: {fd} vs {wide}");
    }
}

#[test]
fn domain_errors() {
    let p = case1();
    assert!(matches!(v_eps(&p, 0.0, 0.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(v_eps(&p, 0.0, 1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(v_eps(&p, f64::NAN, 1.0, 1.0), Err(Error::Domain(_))));
}

/// For `x < a − √(−2u_a t)` in Case 1, `A e^{A² + u_a/ε}` grows without bound and
/// `erfc(A) e^{|u_a|/ε}` decays to zero, both monotonically along `ε = 10^{−k}`.
#[test]
fn limit_facts_for_far_left_points() {
    let p = case1();
    let t = 1.0;
    let x = p.a - (-2.0 * p.u_a * t).sqrt() - 0.3;
    let mut prev_grow = f64::NEG_INFINITY;
    let mut prev_decay = f64::INFINITY;
    for k in 1..=6 {
        let eps = 10f64.powi(-k);
        let a = scaled_args(&p, x, t, eps).unwrap().a;
        let ln_grow = a.ln() + a * a + p.u_a / eps;
        let ln_decay = erfc_scaled(a).unwrap().ln() - a * a + p.u_a.abs() / eps;
        assert!(ln_grow > prev_grow && ln_decay < prev_decay);
        prev_grow = ln_grow;
        prev_decay = ln_decay;
    }
    assert!(prev_grow > 100.0 && prev_decay < -100.0);
}

#[test]
fn magnitude_bounds_value() {
    let p = case1();
    for x in [-2.0, 0.5, 1.5, 2.5, 3.5] {
        let s = s_eps(&p, x, 1.0, 0.1).unwrap();
        let m = s_eps_magnitude(&p, x, 1.0, 0.1).unwrap();
        assert!(s.ln_abs() <= m.ln_abs() + 1e-12);
    }
}

fn params_strategy() -> impl Strategy<Value = ProblemParams> {
    (
        -2.0f64..2.0,
        0.2f64..1.5,
        0.2f64..1.5,
        0.2f64..1.5,
        prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
        prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
        -2.0f64..2.0,
        -2.0f64..2.0,
    )
        .prop_map(|(a, g1, g2, g3, u_a, u_b, rc, rd)| {
            ProblemParams::new(a, a + g1, a + g1 + g2, a + g1 + g2 + g3, u_a, u_b, rc, rd).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn v_is_positive(p in params_strategy(), x in -10.0f64..10.0, t in 0.01f64..10.0, le in -6.0f64..0.5) {
        let v = v_eps(&p, x, t, 10f64.powf(le)).unwrap();
        prop_assert!(v.mantissa > 0.0);
    }

    #[test]
    fn r_times_v_is_s(p in params_strategy(), x in -6.0f64..6.0, t in 0.05f64..5.0, le in -3.0f64..0.3) {
        let eps = 10f64.powf(le);
        let st = viscous_state(&p, x, t, eps).unwrap();
        let rv = st.v.scale(st.r);
        let m = s_eps_magnitude(&p, x, t, eps).unwrap();
        prop_assert!(rv.relative_difference(st.s, m) <= 1e-9);
    }

    #[test]
    fn stable_and_naive_agree(p in params_strategy(), x in -4.0f64..6.0, t in 0.1f64..3.0, eps in 0.2f64..2.0) {
        if let Ok(n) = u_eps_naive(&p, x, t, eps) {
            let s = u_eps_stable(&p, x, t, eps).unwrap().value;
            prop_assert!((s - n).abs() <= 1e-9 * n.abs().max(1.0), "{} vs {}", s, n);
        }
        if let Ok(n) = r_eps_naive(&p, x, t, eps) {
            let s = r_eps_stable(&p, x, t, eps).unwrap().value;
            prop_assert!((s - n).abs() <= 1e-9 * n.abs().max(1.0), "{} vs {}", s, n);
        }
    }

    #[test]
    fn fields_continuous_across_internal_boundaries(p in params_strategy(), t in 0.1f64..3.0, le in -2.0f64..0.3, which in 0usize..5) {
        let eps = 10f64.powf(le);
        let x0 = [p.a, p.c, p.b, p.d, p.a + p.u_a * t][which];
        let h = 1e-9 * x0.abs().max(1.0);
        let (l, r) = (viscous_state(&p, x0 - h, t, eps).unwrap(), viscous_state(&p, x0 + h, t, eps).unwrap());
        prop_assert!((l.u - r.u).abs() <= 1e-6 * l.u.abs().max(1.0));
        prop_assert!((l.r - r.r).abs() <= 1e-6 * l.r.abs().max(1.0));
        prop_assert!(l.v.relative_difference(r.v, r.v) <= 1e-6);
    }

    #[test]
    fn closed_form_matches_quadrature(p in params_strategy(), x in -6.0f64..8.0, t in 0.05f64..5.0, k in 0usize..3) {
        let eps = [1.0, 0.1, 0.01][k];
        let v = v_eps(&p, x, t, eps).unwrap();
        let vq = v_quad(&p, x, t, eps, 1e-12).unwrap();
        prop_assert!(v.relative_difference(vq.value, vq.value) <= 1e-8);
        let s = s_eps(&p, x, t, eps).unwrap();
        let sq = s_quad(&p, x, t, eps, 1e-12).unwrap();
        let m = s_eps_magnitude(&p, x, t, eps).unwrap();
        prop_assert!(s.relative_difference(sq.value, m) <= 1e-8);
    }

    #[test]
    fn stable_path_is_finite_for_tiny_viscosity(p in params_strategy(), x in -8.0f64..8.0, t in 0.05f64..5.0, le in -6.0f64..-3.0) {
        let st = viscous_state(&p, x, t, 10f64.powf(le)).unwrap();
        prop_assert!(st.u.is_finite() && st.r.is_finite());
    }
}
