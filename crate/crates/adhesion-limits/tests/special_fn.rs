use adhesion_limits::special_fn::{
    erfc_paper, erfc_scaled, erfc_scaled_two_term, f_stable, two_term_remainder_bound, ErfcValue, HALF_SQRT_PI,
    SQRT_PI,
};
use adhesion_limits::Error;
use proptest::prelude::*;

// Reference values computed with mpmath at 40 digits.
const ERFC_PAPER_1: f64 = 0.139_402_792_640_330_988_249_616_305_538_7;
const ERFC_PAPER_HALF: f64 = 0.424_945_919_039_965_564_893_380_804_930_1;
const ERFC_PAPER_MINUS_2: f64 = 1.768_308_316_215_179_693_616_564_777_584_6;
const ERFC_SCALED_4: f64 = 0.121_412_608_119_753_560_803_273_698_657_2;
const ERFC_SCALED_10: f64 = 0.049_753_659_391_223_487_369_036_859_839_06;
const ERFC_SCALED_30: f64 = 0.016_657_422_796_805_108_128_450_513_346_01;
const ERFC_SCALED_50: f64 = 0.009_998_001_198_801_676_982_635_554_436_076;
const ERFC_SCALED_MINUS_3: f64 = 14_362.183_676_001_718_929_117_071_147_762;

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

#[test]
fn erfc_paper_at_zero_is_half_sqrt_pi() {
    assert!((erfc_paper(0.0).unwrap() - HALF_SQRT_PI).abs() < 1e-16);
    assert!((erfc_scaled(0.0).unwrap() - HALF_SQRT_PI).abs() < 1e-16);
}

#[test]
fn erfc_paper_reference_values() {
    assert!(rel(erfc_paper(1.0).unwrap(), ERFC_PAPER_1) < 1e-14);
    assert!(rel(erfc_paper(0.5).unwrap(), ERFC_PAPER_HALF) < 1e-14);
    assert!(rel(erfc_paper(-2.0).unwrap(), ERFC_PAPER_MINUS_2) < 1e-14);
}

#[test]
fn reflection_at_1_3() {
    let sum = erfc_paper(1.3).unwrap() + erfc_paper(-1.3).unwrap();
    assert!((sum - SQRT_PI).abs() < 1e-14);
}

#[test]
fn erfc_scaled_reference_values() {
    for (z, want) in [
        (4.0, ERFC_SCALED_4),
        (10.0, ERFC_SCALED_10),
        (30.0, ERFC_SCALED_30),
        (50.0, ERFC_SCALED_50),
        (-3.0, ERFC_SCALED_MINUS_3),
    ] {
        let got = erfc_scaled(z).unwrap();
        assert!(rel(got, want) < 1e-13, "z = {z}: {got} vs {want}");
    }
}

#[test]
fn erfc_scaled_matches_plain_times_exponential() {
    let direct = erfc_paper(4.0).unwrap() * 16f64.exp();
    assert!(rel(erfc_scaled(4.0).unwrap(), direct) < 1e-10);
}

#[test]
fn f_stable_reference_values() {
    assert_eq!(f_stable(0.0).unwrap(), 0.0);
    assert!(rel(f_stable(10.0).unwrap(), 10.0 * ERFC_SCALED_10) < 1e-13);
    assert!((f_stable(50.0).unwrap() - 0.5).abs() <= 3.0 / (8.0 * 2500.0));
}

#[test]
fn two_term_expansion_and_bound() {
    let z = 10.0;
    assert!((erfc_scaled_two_term(z) - (1.0 / 20.0 - 1.0 / 4000.0)).abs() < 1e-17);
    assert!((two_term_remainder_bound(z) - 3.0 / 8e5).abs() < 1e-20);
}

#[test]
fn erfc_value_carries_both_forms() {
    let v = ErfcValue::at(2.0).unwrap();
    assert_eq!(v.plain, erfc_paper(2.0).unwrap());
    assert_eq!(v.scaled, erfc_scaled(2.0).unwrap());
}

#[test]
fn scaled_overflow_is_reported() {
    assert!(matches!(erfc_scaled(-30.0), Err(Error::Overflow(_))));
    assert!(matches!(erfc_paper(f64::NAN), Err(Error::Domain(_))));
}

#[test]
fn plain_erfc_underflows_to_zero_for_large_arguments() {
    assert_eq!(erfc_paper(40.0).unwrap(), 0.0);
    assert!(erfc_scaled(40.0).unwrap() > 0.0);
}

proptest! {
    #[test]
    fn reflection_identity(z in -6.0f64..6.0) {
        let sum = erfc_paper(z).unwrap() + erfc_paper(-z).unwrap();
        prop_assert!((sum - SQRT_PI).abs() <= 1e-13);
    }

    // Below about -5.9 the value rounds to √π itself, above 26 it underflows.
    #[test]
    fn plain_in_open_range(z in -5.5f64..26.0) {
        let e = erfc_paper(z).unwrap();
        prop_assert!(e > 0.0 && e < SQRT_PI);
    }

    #[test]
    fn plain_strictly_decreasing(z1 in -4.0f64..8.0, dz in 1e-3f64..2.0) {
        prop_assert!(erfc_paper(z1).unwrap() > erfc_paper(z1 + dz).unwrap());
    }

    #[test]
    fn scaled_is_positive(z in -26.0f64..1e6) {
        prop_assert!(erfc_scaled(z).unwrap() > 0.0);
    }

    #[test]
    fn asymptotic_remainder_bound(z in 2.0f64..100.0) {
        let err = (erfc_scaled(z).unwrap() - erfc_scaled_two_term(z)).abs();
        prop_assert!(err <= two_term_remainder_bound(z), "z = {}: {} > {}", z, err, two_term_remainder_bound(z));
    }

    // Beyond z ≈ 4e7 the gap 1/(4z²) to 1/2 is below one ulp.
    #[test]
    fn f_stable_in_zero_half(z in 1e-6f64..1e7) {
        let f = f_stable(z).unwrap();
        prop_assert!(f > 0.0 && f < 0.5);
    }

    #[test]
    fn f_stable_bound_and_monotone(z in 2.0f64..1e4, dz in 1e-2f64..10.0) {
        let (f1, f2) = (f_stable(z).unwrap(), f_stable(z + dz).unwrap());
        prop_assert!((f1 - 0.5).abs() <= 3.0 / (8.0 * z * z));
        prop_assert!(f2 >= f1);
    }
}
