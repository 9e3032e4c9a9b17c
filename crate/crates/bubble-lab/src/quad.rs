//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7-point Gauss rule embedded in a 15-point Kronrod rule supplies a
//! value and an error estimate per interval; global adaptivity repeatedly
//! bisects the interval carrying the largest estimated error until the
//! requested tolerance is met.  This is the workhorse behind the kernel
//! identity checks in [`crate::greens`], whose integrands are smooth, so a
//! few dozen subdivisions normally suffice.

use crate::error::{Error, Result};

// ─────────────────────────── 15-point Kronrod rule ───────────────────────────

/// Abscissae of the 15-point Kronrod rule on [−1, 1]; odd indices are the
/// embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Weights of the 15-point Kronrod rule.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// Result of one Kronrod evaluation on an interval.
#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

/// Evaluate the G7/K15 pair on `[lo, hi]`.
///
/// The error estimate follows the QUADPACK rescaling: the raw
/// Gauss–Kronrod difference is sharpened by `(200·err/resasc)^{3/2}` and
/// floored at `50 ε · ∫|f|` so rounding noise is never reported as zero
/// error.
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [[0.0f64; 2]; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = [f1, f2];
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j][0] - mean).abs() + (fv[j][1] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    Panel { lo, hi, value, error: err }
}

// ─────────────────────────── adaptive driver ───────────────────────────

/// Hard cap on the number of panels the adaptive driver may hold.
pub const MAX_PANELS: usize = 2_048;

/// Value and attained error bound of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    /// Estimate of the integral.
    pub value: f64,
    /// Attained absolute error estimate.
    pub abs_error: f64,
    /// Number of bisections performed.
    pub subdivisions: usize,
}

/// Integrate `f` over `[lo, hi]` until the summed error estimate drops
/// below `max(abs_tol, rel_tol · |value|)`.
///
/// # Errors
/// [`Error::Domain`] for reversed bounds, [`Error::Quadrature`] when the
/// panel budget [`MAX_PANELS`] is exhausted before the tolerance is met.
pub fn integrate_tol<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    if lo > hi {
        return Err(Error::domain("integrate", format!("reversed bounds [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, subdivisions: 0 });
    }

    let mut panels = vec![kronrod_panel(&f, lo, hi)];
    let mut subdivisions = 0usize;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            return Ok(QuadResult { value, abs_error: error, subdivisions });
        }
        if panels.len() + 1 > MAX_PANELS {
            return Err(Error::Quadrature { achieved: error, requested: target });
        }
        // Bisect the panel with the largest error estimate.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            // Interval at rounding resolution; cannot refine further.
            return Err(Error::Quadrature { achieved: error, requested: target });
        }
        panels.push(kronrod_panel(&f, p.lo, mid));
        panels.push(kronrod_panel(&f, mid, p.hi));
        subdivisions += 1;
    }
}

/// [`integrate_tol`] with a single tolerance used both absolutely and
/// relatively.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    integrate_tol(f, lo, hi, tol, tol)
}

// ─────────────────────────── tests ───────────────────────────
