//! Adaptive Gauss-Kronrod quadrature on `[0, ∞)` for positive,
//! exponentially decaying integrands.
//!
//! The half line is cut at a point `L` located by walking a geometric grid
//! outward until the integrand's contribution per octave has dropped well
//! below the requested tolerance. `[0, L]` is then integrated with a global
//! adaptive 7/15-point Gauss-Kronrod scheme seeded with the octave panels,
//! and the discarded tail is bounded from an exponential fit to the last
//! two grid samples.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for [`integrate_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) {
            return Err(Error::Config(format!(
                "quadrature tolerances must be positive (rel_tol = {rel_tol}, abs_tol = {abs_tol})"
            )));
        }
        if max_subdivisions < 1 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral estimate together with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod evaluation with the QUADPACK error heuristic.
fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// Adaptive integration over the given consecutive breakpoints.
fn adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    breakpoints: &[f64],
    extra_error: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        heap.push(gauss_kronrod(f, w[0], w[1]));
        evaluations += 15;
    }
    let mut subdivisions = heap.len();
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum::<f64>() + extra_error;
        if error <= spec.target(value) {
            return Ok(QuadResult {
                value,
                abs_error: error,
                evaluations,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence {
                estimate: value,
                error_bound: error,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // panel has shrunk to adjacent floats
            return Err(Error::Convergence {
                estimate: value,
                error_bound: error,
            });
        }
        heap.push(gauss_kronrod(f, worst.a, mid));
        heap.push(gauss_kronrod(f, mid, worst.b));
        evaluations += 30;
        subdivisions += 1;
    }
}

/// `∫ₐᵇ f(x) dx` by adaptive Gauss-Kronrod.
pub fn integrate_interval<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    adaptive(&mut f, &[a, b], 0.0, spec)
}

const FIRST_OCTAVE: f64 = 1.0 / 16.0;
const MAX_CUTOFF: f64 = 1e12;

/// `∫₀^∞ f(Q) dQ` for an integrand that is continuous on `(0, ∞)` and decays
/// at least exponentially.
///
/// The reported `abs_error` includes the bound on the truncated tail. When
/// the tolerance cannot be met within `spec.max_subdivisions` panels the
/// best estimate is returned inside [`Error::Convergence`].
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    // Walk outward over octaves. `mass` approximates the integral over
    // [q/2, q] by q·|f(q)|/2.
    let mut breakpoints = vec![0.0, FIRST_OCTAVE];
    let mut samples = vec![(FIRST_OCTAVE, f(FIRST_OCTAVE))];
    let mut peak = 0.0_f64;
    let mut quiet = 0;
    let mut q = FIRST_OCTAVE;
    loop {
        q *= 2.0;
        let fq = f(q);
        if !fq.is_finite() {
            return Err(Error::Domain(format!("integrand is not finite at Q = {q}")));
        }
        breakpoints.push(q);
        samples.push((q, fq));
        let mass = 0.5 * q * fq.abs();
        peak = peak.max(mass);
        let threshold = 1e-3 * spec.target(peak);
        let prev = samples[samples.len() - 2].1.abs();
        if mass < threshold && fq.abs() <= prev {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 && q >= 1.0 {
            break;
        }
        if q > MAX_CUTOFF {
            return Err(Error::Convergence {
                estimate: f64::NAN,
                error_bound: f64::INFINITY,
            });
        }
    }

    let n = samples.len();
    let (q_prev, f_prev) = samples[n - 2];
    let (q_last, f_last) = samples[n - 1];
    let tail = if f_last == 0.0 {
        0.0
    } else {
        let rate = (f_prev.abs() / f_last.abs()).ln() / (q_last - q_prev);
        if rate > 0.0 {
            f_last.abs() / rate
        } else {
            0.5 * q_last * f_last.abs()
        }
    };

    adaptive(&mut f, &breakpoints, tail, spec)
}
