//! Bose statistics of the renormalized field modes.
//!
//! In the dimensionless variables `Q = βħck`, `τ = T/T_s` and
//! `α = nγ²/(2ϰħcμ³)` the thermal (zero-point subtracted) energy of one
//! channel is `W_s(T) = P·T⁴·(π⁴/15)·f(α, τ)`, with a universal curve
//!
//! ```text
//! f(α, τ) = 15/π⁴ ∫₀^∞ s/(eˢ − 1) · (1 − 1/(2[(τ/α)(τ²Q² + 1) − 1])) · Q² dQ,
//! s(Q) = √(Q² + (1 − α/τ)/τ²),
//! ```
//!
//! defined for `τ > α` only. `f → 1` for `τ → ∞` (Stefan-Boltzmann) and its
//! `τ`-derivative diverges at the left edge `τ → α⁺`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::classical::{dispersion, FieldChannel, Medium, ModeIndex};
use crate::error::{Error, Result};
use crate::numerics::{
    derivative_bounded, derivative_central_above, integrate_semi_infinite, QuadratureSpec,
};

/// `π⁴/15 = ∫₀^∞ Q³/(e^Q − 1) dQ`.
pub const STEFAN_BOLTZMANN_INTEGRAL: f64 = PI * PI * PI * PI / 15.0;

/// A temperature state with the per-channel reduced temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoPoint {
    pub temperature: f64,
    pub beta: f64,
    pub tau: Vec<f64>,
}

impl ThermoPoint {
    pub fn new(temperature: f64, channels: &[FieldChannel], medium: &Medium) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        Ok(Self {
            temperature,
            beta: 1.0 / temperature,
            tau: channels
                .iter()
                .map(|ch| temperature / ch.t_char(medium))
                .collect(),
        })
    }
}

/// Normalization of the field energy `W = P·T⁴·(π⁴/15)·f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Prefactor {
    /// `P = V/((2π)⁴(ħc)³)`, as printed alongside the dimensionless integral.
    #[default]
    Paper,
    /// `P = V/(2π²(ħc)³)`, which follows from the density of states
    /// `V·4πk²/(2π)³` and is `8π²` times larger.
    Dos,
}

impl Prefactor {
    pub fn coefficient(self, medium: &Medium) -> f64 {
        let hc3 = (medium.hbar * medium.c).powi(3);
        match self {
            Prefactor::Paper => medium.volume / ((2.0 * PI).powi(4) * hc3),
            Prefactor::Dos => medium.volume / (2.0 * PI * PI * hc3),
        }
    }
}

impl std::str::FromStr for Prefactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Prefactor::Paper),
            "dos" => Ok(Prefactor::Dos),
            other => Err(Error::Config(format!(
                "unknown prefactor `{other}` (expected `paper` or `dos`)"
            ))),
        }
    }
}

/// How `∂f/∂τ` is taken near the edge of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Symmetric stencil only; fails with [`Error::Boundary`] if it would
    /// reach `τ = α`.
    Central,
    /// Symmetric where possible, one-sided with shrinking steps near `τ = α`.
    #[default]
    Auto,
}

fn check_tau(alpha: f64, tau: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha must be non-negative, got {alpha}"
        )));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!(
            "reduced temperature must be positive, got {tau}"
        )));
    }
    if tau <= alpha {
        return Err(Error::Subcritical(format!(
            "tau = {tau} is not above alpha = {alpha}"
        )));
    }
    Ok(())
}

/// `βħω = √(Q² + (1 − α/τ)/τ²)`.
pub fn beta_hbar_omega(alpha: f64, q: f64, tau: f64) -> Result<f64> {
    check_tau(alpha, tau)?;
    Ok(reduced_energy(alpha, q, tau))
}

fn reduced_energy(alpha: f64, q: f64, tau: f64) -> f64 {
    (q * q + (1.0 - alpha / tau) / (tau * tau)).sqrt()
}

/// Partition function of one harmonic, `e^{−x/2}/(1 − e^{−x})` with
/// `x = βħω`.
pub fn mode_partition_q(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "beta*hbar*omega must be positive, got {x}"
        )));
    }
    Ok((-0.5 * x).exp() / -(-x).exp_m1())
}

/// `(c²/(2ω²))·(nβγ²/(2ϰ))`, the factor by which the temperature
/// dependence of `ω` reduces a mode's mean energy.
pub fn harmonic_correction(mode: &ModeIndex, medium: &Medium, beta: f64) -> Result<f64> {
    let omega = dispersion(mode, medium, beta)?;
    if omega <= 0.0 {
        return Err(Error::Subcritical(format!(
            "mode (mu = {}, k = {}) has zero frequency at T = {}",
            mode.channel.mu,
            mode.k,
            1.0 / beta
        )));
    }
    Ok(medium.c * medium.c / (2.0 * omega * omega) * beta * mode.channel.coupling_strength(medium))
}

/// The same factor written through the bare parameters,
/// `1/(2[2Tϰ(k² + μ²)/(nγ²) − 1])`.
pub fn energy_integrand_correction(mode: &ModeIndex, medium: &Medium, temperature: f64) -> f64 {
    let ch = mode.channel;
    let bare = mode.k * mode.k + ch.mu * ch.mu;
    let ratio = temperature * bare / ch.coupling_strength(medium);
    0.5 / (ratio - 1.0)
}

/// Mean energy of one mode including zero-point motion:
/// `[ħω/2 + ħω/(e^{βħω} − 1)]·(1 − correction)`.
pub fn mode_energy_q(mode: &ModeIndex, medium: &Medium, beta: f64) -> Result<f64> {
    let correction = harmonic_correction(mode, medium, beta)?;
    let e = medium.hbar * dispersion(mode, medium, beta)?;
    Ok((0.5 * e + e / (beta * e).exp_m1()) * (1.0 - correction))
}

/// Thermal part of the same: `ħω/(e^{βħω} − 1)·(1 − correction)`.
pub fn mode_thermal_energy_q(mode: &ModeIndex, medium: &Medium, beta: f64) -> Result<f64> {
    let correction = harmonic_correction(mode, medium, beta)?;
    let e = medium.hbar * dispersion(mode, medium, beta)?;
    Ok(e / (beta * e).exp_m1() * (1.0 - correction))
}

/// Number of states per unit `k`, `V·4πk²/(2π)³`.
pub fn density_of_states(medium: &Medium, k: f64) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::Domain(format!(
            "wavevector must be non-negative, got {k}"
        )));
    }
    Ok(medium.volume * 4.0 * PI * k * k / (2.0 * PI).powi(3))
}

/// The zero-point term of the field energy, `Σ ħω/2` over all modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPointEnergy {
    UvDivergent,
}

impl std::fmt::Display for ZeroPointEnergy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("zero-point energy divergent (UV)")
    }
}

/// The zero-point contribution has no finite value; it is reported, not
/// computed. [`field_energy`] is measured from it.
pub fn zero_point_energy(_channel: &FieldChannel) -> ZeroPointEnergy {
    ZeroPointEnergy::UvDivergent
}

/// Integrand of `f(α, τ)` without the `15/π⁴` normalization.
pub fn f_integrand(alpha: f64, tau: f64, q: f64) -> f64 {
    let s = reduced_energy(alpha, q, tau);
    let bose = if s == 0.0 { 1.0 } else { s / s.exp_m1() };
    let correction = if alpha == 0.0 {
        1.0
    } else {
        1.0 - 0.5 / ((tau / alpha) * (tau * tau * q * q + 1.0) - 1.0)
    };
    bose * correction * q * q
}

/// The universal curve `f(α, τ)`, normalized to one at high temperature.
pub fn f_curve(alpha: f64, tau: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_tau(alpha, tau)?;
    let r = integrate_semi_infinite(|q| f_integrand(alpha, tau, q), spec)?;
    Ok(r.value / STEFAN_BOLTZMANN_INTEGRAL)
}

/// `f₂(α, τ) = ∂f/∂τ`.
pub fn f2_curve(alpha: f64, tau: f64, spec: &QuadratureSpec, mode: DerivativeMode) -> Result<f64> {
    check_tau(alpha, tau)?;
    let f = |t: f64| f_curve(alpha, t, spec);
    let d = match mode {
        DerivativeMode::Central => derivative_central_above(f, tau, tau, alpha)?,
        DerivativeMode::Auto => derivative_bounded(f, tau, tau, alpha)?,
    };
    Ok(d.value)
}

fn channel_tau(channel: &FieldChannel, medium: &Medium, temperature: f64) -> Result<(f64, f64)> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    let alpha = channel.alpha(medium);
    let tau = temperature / channel.t_char(medium);
    if tau <= alpha {
        return Err(Error::Subcritical(format!(
            "T = {temperature} is not above the channel threshold {} (mu = {})",
            alpha * channel.t_char(medium),
            channel.mu
        )));
    }
    Ok((alpha, tau))
}

/// `W_s(T) = P·T⁴·(π⁴/15)·f(α_s, T/T_s)`.
pub fn field_energy(
    channel: &FieldChannel,
    medium: &Medium,
    temperature: f64,
    spec: &QuadratureSpec,
    prefactor: Prefactor,
) -> Result<f64> {
    let (alpha, tau) = channel_tau(channel, medium, temperature)?;
    let f = f_curve(alpha, tau, spec)?;
    Ok(prefactor.coefficient(medium) * temperature.powi(4) * STEFAN_BOLTZMANN_INTEGRAL * f)
}

fn heat_capacity_from(
    channel: &FieldChannel,
    medium: &Medium,
    temperature: f64,
    f: f64,
    f2: f64,
    prefactor: Prefactor,
) -> f64 {
    let p = prefactor.coefficient(medium) * STEFAN_BOLTZMANN_INTEGRAL;
    let t3 = temperature.powi(3);
    p * (4.0 * t3 * f + t3 * temperature * f2 / channel.t_char(medium))
}

/// `C_V = dW_s/dT = P(π⁴/15)[4T³f + T⁴f₂/T_s]`.
pub fn heat_capacity_contrib(
    channel: &FieldChannel,
    medium: &Medium,
    temperature: f64,
    spec: &QuadratureSpec,
    prefactor: Prefactor,
    mode: DerivativeMode,
) -> Result<f64> {
    let (alpha, tau) = channel_tau(channel, medium, temperature)?;
    let f = f_curve(alpha, tau, spec)?;
    let f2 = f2_curve(alpha, tau, spec, mode)?;
    Ok(heat_capacity_from(
        channel,
        medium,
        temperature,
        f,
        f2,
        prefactor,
    ))
}

/// One point of a `f(α, τ)` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub tau: f64,
    pub f: f64,
    pub f2: f64,
    pub cv_contrib: Option<f64>,
}

fn check_grid(alpha: f64, tau_grid: &[f64]) -> Result<Vec<f64>> {
    let bad: Vec<String> = tau_grid
        .iter()
        .filter(|&&t| !(t > alpha && t.is_finite()))
        .map(|t| t.to_string())
        .collect();
    if !bad.is_empty() {
        return Err(Error::Subcritical(format!(
            "tau grid points not above alpha = {alpha}: {}",
            bad.join(", ")
        )));
    }
    let mut sorted = tau_grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// `(τ, f, f₂)` over a grid, sorted by `τ`. Any point at or below `α` fails
/// the whole sweep.
pub fn f_curve_sweep(
    alpha: f64,
    tau_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<CurveSample>> {
    let grid = check_grid(alpha, tau_grid)?;
    grid.par_iter()
        .map(|&tau| {
            Ok(CurveSample {
                tau,
                f: f_curve(alpha, tau, spec)?,
                f2: f2_curve(alpha, tau, spec, DerivativeMode::Auto)?,
                cv_contrib: None,
            })
        })
        .collect()
}

/// Like [`f_curve_sweep`] for a physical channel, adding the heat-capacity
/// contribution at `T = τ·T_s`.
pub fn curve_sweep(
    channel: &FieldChannel,
    medium: &Medium,
    tau_grid: &[f64],
    spec: &QuadratureSpec,
    prefactor: Prefactor,
) -> Result<Vec<CurveSample>> {
    let t_s = channel.t_char(medium);
    let mut samples = f_curve_sweep(channel.alpha(medium), tau_grid, spec)?;
    for s in &mut samples {
        s.cv_contrib = Some(heat_capacity_from(
            channel,
            medium,
            s.tau * t_s,
            s.f,
            s.f2,
            prefactor,
        ));
    }
    Ok(samples)
}
