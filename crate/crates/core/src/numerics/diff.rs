//! Numerical differentiation by Richardson extrapolation of finite
//! differences (Ridders' tableau).

use crate::error::{Error, Result};

const TABLE_SIZE: usize = 10;
const SHRINK: f64 = 1.4;
const SAFE: f64 = 2.0;

/// A derivative estimate with the extrapolation error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
    pub step: f64,
}

fn eval<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    match f(x) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(Error::Domain(format!(
            "function is not finite at stencil point {x} (value {v})"
        ))),
        Err(e) => Err(Error::Domain(format!(
            "function undefined at stencil point {x}: {e}"
        ))),
    }
}

/// Ridders' extrapolation. `order_step` is 2 for a symmetric difference
/// (even error powers) and 1 for a one-sided one.
fn extrapolate<D>(mut difference: D, h0: f64, order_step: i32) -> Result<Derivative>
where
    D: FnMut(f64) -> Result<f64>,
{
    let ratio = SHRINK.powi(order_step);
    let mut table = [[0.0_f64; TABLE_SIZE]; TABLE_SIZE];
    let mut h = h0;
    table[0][0] = difference(h)?;
    let mut best = Derivative {
        value: table[0][0],
        error: f64::INFINITY,
        step: h,
    };
    for i in 1..TABLE_SIZE {
        h /= SHRINK;
        table[0][i] = difference(h)?;
        let mut fac = ratio;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= ratio;
            let err = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if err <= best.error {
                best = Derivative {
                    value: table[j][i],
                    error: err,
                    step: h,
                };
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * best.error {
            break;
        }
    }
    Ok(best)
}

/// Central-difference derivative of `f` at `x` with Richardson refinement.
///
/// The initial step is `scale · 1e-3`; the stencil never leaves
/// `[x - h₀, x + h₀]`. A failure of `f` at a stencil point is reported as a
/// domain error naming that point.
pub fn derivative<F>(mut f: F, x: f64, scale: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    derivative_central(&mut f, x, scale).map(|d| d.value)
}

/// Like [`derivative`] but returns the full estimate.
pub fn derivative_central<F>(f: &mut F, x: f64, scale: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h0 = initial_step(x, scale)?;
    extrapolate(
        |h| Ok((eval(f, x + h)? - eval(f, x - h)?) / (2.0 * h)),
        h0,
        2,
    )
}

/// Forward-difference derivative: every stencil point lies in `[x, x + 2h₀]`.
pub fn derivative_forward<F>(f: &mut F, x: f64, h0: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(h0 > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h0}")));
    }
    let f0 = eval(f, x)?;
    extrapolate(|h| Ok((eval(f, x + h)? - f0) / h), h0, 1)
}

/// Derivative of a function defined only for arguments above `lower`.
///
/// Uses central differences when the whole stencil stays above `lower`;
/// otherwise switches to forward differences with the initial step capped
/// at a quarter of the distance to the boundary, so that the steps shrink
/// with the distance to the singular edge.
pub fn derivative_bounded<F>(mut f: F, x: f64, scale: f64, lower: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(x > lower) {
        return Err(Error::Domain(format!(
            "point {x} is not above the domain boundary {lower}"
        )));
    }
    let h0 = initial_step(x, scale)?;
    if x - h0 > lower {
        derivative_central(&mut f, x, scale)
    } else {
        derivative_forward(&mut f, x, h0.min(0.25 * (x - lower)))
    }
}

/// Central derivative that refuses to let the stencil touch `lower`.
pub fn derivative_central_above<F>(mut f: F, x: f64, scale: f64, lower: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h0 = initial_step(x, scale)?;
    if !(x - h0 > lower) {
        return Err(Error::Boundary {
            point: x - h0,
            boundary: lower,
        });
    }
    derivative_central(&mut f, x, scale)
}

fn initial_step(x: f64, scale: f64) -> Result<f64> {
    let h0 = scale.abs() * 1e-3;
    if !(h0 > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "derivative needs a finite point and nonzero scale (x = {x}, scale = {scale})"
        )));
    }
    Ok(h0)
}
