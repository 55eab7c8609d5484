//! Globally adaptive 7/15-point Gauss–Kronrod quadrature on finite intervals.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate falls below `max(abs_tol, rel_tol·|I|)`. Error estimates follow the
//! QUADPACK `qk15` heuristics.

use crate::error::{Error, Result};

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Estimated absolute error; at most the requested tolerance on success.
    pub abs_error_estimate: f64,
    /// Integral of `|f|` over the same interval, useful as a cancellation scale.
    pub abs_value: f64,
    /// Number of bisections performed.
    pub subdivisions: usize,
}

/// Tolerances and limits of the adaptive driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-12, max_subdivisions: 2000 }
    }
}

impl QuadratureOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > e {
            e = min_err;
        }
    }
    e
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let abs_value = res_abs * half.abs();
    let error = rescale_error((res_k - res_g) * half, abs_value, res_asc * half.abs());
    Panel { lo, hi, value, error, abs_value }
}

/// Integrates `f` over `[lo, hi]` (finite bounds) adaptively.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, opts: QuadratureOptions) -> Result<QuadratureResult> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("integration bounds must be finite, got [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(QuadratureResult { value: 0.0, abs_error_estimate: 0.0, abs_value: 0.0, subdivisions: 0 });
    }
    let mut panels = vec![kronrod15(&mut f, lo, hi)];
    let mut subdivisions = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
        if !value.is_finite() {
            return Err(Error::Overflow(format!("integrand is not finite on [{lo}, {hi}]")));
        }
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= tol {
            return Ok(QuadratureResult { value, abs_error_estimate: error, abs_value, subdivisions });
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::Quadrature { estimate: error, tolerance: tol, subdivisions });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo.min(p.hi) || mid >= p.lo.max(p.hi) {
            return Err(Error::Quadrature { estimate: error, tolerance: tol, subdivisions });
        }
        panels.push(kronrod15(&mut f, p.lo, mid));
        panels.push(kronrod15(&mut f, mid, p.hi));
        subdivisions += 1;
    }
}

/// Integrates over `[lo, hi]` split at the given interior breakpoints.
///
/// Each piece is integrated separately with the same options; breakpoints
/// outside `(lo, hi)` are ignored.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    opts: QuadratureOptions,
) -> Result<QuadratureResult> {
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > lo && b < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);
    let mut total = QuadratureResult { value: 0.0, abs_error_estimate: 0.0, abs_value: 0.0, subdivisions: 0 };
    for w in edges.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts)?;
        total.value += r.value;
        total.abs_error_estimate += r.abs_error_estimate;
        total.abs_value += r.abs_value;
        total.subdivisions += r.subdivisions;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 2.0 * x, -1.0, 2.0, QuadratureOptions::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 1.0 / 6.0 - 3.0)).abs() < 1e-13);
    }

    #[test]
    fn sqrt_singularity_converges() {
        let r = integrate(|x| x.sqrt(), 0.0, 1.0, QuadratureOptions::new(1e-12, 1e-12)).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
        assert!(r.subdivisions > 0);
    }
}
