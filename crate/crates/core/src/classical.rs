//! Classical statistical mechanics of atoms coupled to the auxiliary field.
//!
//! Integrating out atomic positions leaves, for every field mode `(s, k)`,
//! a factor `I₀(βγ_s √(ψ² + χ²))^N` multiplying the free-oscillator
//! Boltzmann weight. The resulting nonlinear oscillators are independent;
//! in the quadratic approximation `ln I₀(x) ≈ x²/4` each one is a harmonic
//! pair with the temperature-dependent frequency
//! `ω_s(k, β) = c √(k² + μ_s² − nβγ_s²/(2ϰ_s))`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{bessel_i0, integrate_semi_infinite, ln_bessel_i0, QuadratureSpec};

/// Sign of the static Yukawa term a channel reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum CouplingSign {
    #[default]
    Repulsive,
    Attractive,
}

impl CouplingSign {
    pub fn from_strength(strength: f64) -> Self {
        if strength < 0.0 {
            CouplingSign::Attractive
        } else {
            CouplingSign::Repulsive
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            CouplingSign::Repulsive => 1.0,
            CouplingSign::Attractive => -1.0,
        }
    }
}

/// One elementary auxiliary field: mass parameter `μ`, field-energy
/// normalization `ϰ` and atom–field coupling `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldChannel {
    pub mu: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub sign: CouplingSign,
}

impl FieldChannel {
    pub fn new(mu: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Config(format!(
                "channel mu must be positive, got {mu}"
            )));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Config(format!(
                "channel kappa must be positive, got {kappa}"
            )));
        }
        if !gamma.is_finite() {
            return Err(Error::Config(format!(
                "channel gamma must be finite, got {gamma}"
            )));
        }
        Ok(Self {
            mu,
            kappa,
            gamma,
            sign: CouplingSign::Repulsive,
        })
    }

    pub fn with_sign(mut self, sign: CouplingSign) -> Self {
        self.sign = sign;
        self
    }

    /// `T_s = ħcμ`, the channel's relativistic quantum temperature scale.
    pub fn t_char(&self, medium: &Medium) -> f64 {
        medium.hbar * medium.c * self.mu
    }

    /// `α_s = nγ²/(2ϰħcμ³)`.
    pub fn alpha(&self, medium: &Medium) -> f64 {
        medium.density() * self.gamma * self.gamma
            / (2.0 * self.kappa * medium.hbar * medium.c * self.mu.powi(3))
    }

    /// `nγ²/(2ϰ)`; the mass shift per unit `β`.
    pub fn coupling_strength(&self, medium: &Medium) -> f64 {
        medium.density() * self.gamma * self.gamma / (2.0 * self.kappa)
    }

    /// `T_crit = nγ²/(2ϰμ²)`, where the `k = 0` renormalized mass vanishes.
    pub fn critical_temperature(&self, medium: &Medium) -> f64 {
        self.coupling_strength(medium) / (self.mu * self.mu)
    }

    /// `γ²/(4πϰ)`, the magnitude of the static Yukawa coefficient.
    pub fn static_strength(&self) -> f64 {
        self.gamma * self.gamma / (4.0 * PI * self.kappa)
    }

    /// Signed static potential `±γ²/(4πϰ) e^{−μr}/r` generated by this
    /// channel between two atoms at rest.
    pub fn static_potential(&self, r: f64) -> f64 {
        self.sign.factor() * self.static_strength() * (-self.mu * r).exp() / r
    }
}

/// System parameters: particle number, volume, atomic mass and unit
/// conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    pub n_atoms: u64,
    pub volume: f64,
    pub mass: f64,
    pub hbar: f64,
    pub c: f64,
}

impl Medium {
    /// Natural units, `ħ = c = 1`.
    pub fn new(n_atoms: u64, volume: f64, mass: f64) -> Result<Self> {
        Self::with_units(n_atoms, volume, mass, 1.0, 1.0)
    }

    pub fn with_units(n_atoms: u64, volume: f64, mass: f64, hbar: f64, c: f64) -> Result<Self> {
        if n_atoms < 1 {
            return Err(Error::Config("medium needs at least one atom".into()));
        }
        for (name, v) in [("volume", volume), ("mass", mass), ("hbar", hbar), ("c", c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "medium {name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            n_atoms,
            volume,
            mass,
            hbar,
            c,
        })
    }

    pub fn n(&self) -> f64 {
        self.n_atoms as f64
    }

    /// Number density `n = N/V`.
    pub fn density(&self) -> f64 {
        self.n() / self.volume
    }
}

/// A field mode: channel `s` and wavevector magnitude `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex<'a> {
    pub channel: &'a FieldChannel,
    pub k: f64,
}

impl<'a> ModeIndex<'a> {
    pub fn new(channel: &'a FieldChannel, k: f64) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!(
                "wavevector must be non-negative, got {k}"
            )));
        }
        Ok(Self { channel, k })
    }

    fn bare_mass_sq(&self) -> f64 {
        self.k * self.k + self.channel.mu * self.channel.mu
    }

    /// `k² + μ² − nβγ²/(2ϰ)`.
    pub fn radicand(&self, medium: &Medium, beta: f64) -> f64 {
        self.bare_mass_sq() - beta * self.channel.coupling_strength(medium)
    }
}

fn subcritical(mode: &ModeIndex, medium: &Medium, beta: f64) -> Error {
    Error::Subcritical(format!(
        "mode (mu = {}, k = {}) at T = {}: k² + μ² − nβγ²/(2ϰ) = {:e} (channel T_crit = {})",
        mode.channel.mu,
        mode.k,
        1.0 / beta,
        mode.radicand(medium, beta),
        mode.channel.critical_temperature(medium)
    ))
}

/// `I₀(x)`: the coordinate integral `∫₀¹ exp(−x cos 2πz) dz` for a single
/// `(s, k)` factor, with `x = βγ√(ψ² + χ²)`.
pub fn single_mode_y(x: f64) -> f64 {
    bessel_i0(x)
}

/// `ω_s(k, β) = c √(k² + μ² − nβγ²/(2ϰ))`.
pub fn dispersion(mode: &ModeIndex, medium: &Medium, beta: f64) -> Result<f64> {
    let rad = mode.radicand(medium, beta);
    if rad < 0.0 {
        return Err(subcritical(mode, medium, beta));
    }
    Ok(medium.c * rad.sqrt())
}

/// Mass parameter with the atom–field interaction absorbed:
/// `√(μ² − nβγ²/(2ϰ))`.
pub fn renormalized_mass(channel: &FieldChannel, medium: &Medium, beta: f64) -> Result<f64> {
    let mode = ModeIndex { channel, k: 0.0 };
    let rad = mode.radicand(medium, beta);
    if rad < 0.0 {
        return Err(subcritical(&mode, medium, beta));
    }
    Ok(rad.sqrt())
}

/// Per-channel critical temperatures and the global threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalTemperatures {
    pub per_channel: Vec<f64>,
    /// Largest per-channel value: every channel is supercritical above it.
    pub global: f64,
    /// Smallest per-channel value, for comparison with the min-over-channels
    /// reading of the convergence condition.
    pub weakest: f64,
}

pub fn critical_temperature(
    channels: &[FieldChannel],
    medium: &Medium,
) -> Result<CriticalTemperatures> {
    if channels.is_empty() {
        return Err(Error::Domain(
            "critical temperature needs at least one channel".into(),
        ));
    }
    let per_channel: Vec<f64> = channels
        .iter()
        .map(|ch| ch.critical_temperature(medium))
        .collect();
    let global = per_channel.iter().copied().fold(0.0, f64::max);
    let weakest = per_channel.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CriticalTemperatures {
        per_channel,
        global,
        weakest,
    })
}

/// Ratio `ρ = nβγ²/(2ϰ(k² + μ²))`; the mode integral converges for `ρ < 1`.
fn coupling_ratio(mode: &ModeIndex, medium: &Medium, beta: f64) -> f64 {
    beta * mode.channel.coupling_strength(medium) / mode.bare_mass_sq()
}

/// `ln` of the momentum integral `∬ dp dp' exp[−βc²(p² + p'²)/(2Vϰ)]`.
pub(crate) fn ln_momentum_factor(mode: &ModeIndex, medium: &Medium, beta: f64) -> f64 {
    (2.0 * PI * medium.volume * mode.channel.kappa / (beta * medium.c * medium.c)).ln()
}

/// Coefficient `A = βNϰ(k² + μ²)/(2n)` of `ψ² + χ²` in the free part of the
/// field exponent.
pub(crate) fn field_gaussian_coefficient(mode: &ModeIndex, medium: &Medium, beta: f64) -> f64 {
    beta * medium.n() * mode.channel.kappa * mode.bare_mass_sq() / (2.0 * medium.density())
}

/// Width `σ` of the free Gaussian in one field variable, `exp(−ψ²/(2σ²))`.
pub fn field_gaussian_width(mode: &ModeIndex, medium: &Medium, beta: f64) -> f64 {
    (0.5 / field_gaussian_coefficient(mode, medium, beta)).sqrt()
}

/// Checks the mode-integral convergence condition
/// `ϰ(k² + μ²)/(2nβγ²) > 1/4`.
pub fn check_convergence(mode: &ModeIndex, medium: &Medium, beta: f64) -> Result<()> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    if coupling_ratio(mode, medium, beta) >= 1.0 {
        return Err(subcritical(mode, medium, beta));
    }
    Ok(())
}

/// `ln Z_s(k)` for one nonlinear mode, evaluated exactly.
///
/// The `(ψ, χ)` integrand depends only on `r = √(ψ² + χ²)`, so the double
/// integral is `2π ∫₀^∞ r exp(−A r²) I₀(βγr)^N dr`. With `u = r√A` this is
/// `(2π/A) ∫₀^∞ u exp(−u² + N ln I₀(βγu/√A)) du`, whose exponent is never
/// positive under the convergence condition.
pub fn mode_partition_exact(
    mode: &ModeIndex,
    medium: &Medium,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_convergence(mode, medium, beta)?;
    let a = field_gaussian_coefficient(mode, medium, beta);
    let scaled_coupling = beta * mode.channel.gamma.abs() / a.sqrt();
    let n = medium.n();
    let radial = integrate_semi_infinite(
        |u| u * (-u * u + n * ln_bessel_i0(scaled_coupling * u)).exp(),
        spec,
    )?;
    Ok(ln_momentum_factor(mode, medium, beta) + (2.0 * PI / a).ln() + radial.value.ln())
}

/// `Z_s(k) = (2π/(βω_s(k, β)))²` from the quadratic Hamiltonian.
pub fn mode_partition_quadratic(mode: &ModeIndex, medium: &Medium, beta: f64) -> Result<f64> {
    let omega = dispersion(mode, medium, beta)?;
    if omega <= 0.0 {
        return Err(subcritical(mode, medium, beta));
    }
    Ok((2.0 * PI / (beta * omega)).powi(2))
}

/// `ln N!`, exact below 21 and by the Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 20 {
        (2..=n).map(|i| (i as f64).ln()).sum()
    } else {
        let x = n as f64;
        x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5))
    }
}

/// Ideal-gas part `ln[V^N/N! (2πm/β)^{3N/2}]`.
pub fn ideal_gas_log_partition(medium: &Medium, beta: f64) -> f64 {
    let n = medium.n();
    n * medium.volume.ln() - ln_factorial(medium.n_atoms)
        + 1.5 * n * (2.0 * PI * medium.mass / beta).ln()
}

/// Isotropic mode grid `k_j = 2πj/V^{1/3}`, `j = 1..=m`.
pub fn default_k_grid(medium: &Medium, m: usize) -> Vec<f64> {
    let dk = 2.0 * PI / medium.volume.cbrt();
    (1..=m).map(|j| dk * j as f64).collect()
}

fn checked_omega(mode: &ModeIndex, medium: &Medium, beta: f64, s: usize) -> Result<f64> {
    match dispersion(mode, medium, beta) {
        Ok(w) if w > 0.0 => Ok(w),
        _ => Err(Error::Subcritical(format!(
            "channel s = {s} (mu = {}) at k = {}: mode is not above its critical temperature \
             {} at T = {}",
            mode.channel.mu,
            mode.k,
            mode.channel.critical_temperature(medium),
            1.0 / beta
        ))),
    }
}

/// `ln Z` of atoms plus field with a finite set of modes per channel.
pub fn classical_log_partition(
    channels: &[FieldChannel],
    medium: &Medium,
    beta: f64,
    k_grid: &[f64],
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let mut ln_z = ideal_gas_log_partition(medium, beta);
    for (s, channel) in channels.iter().enumerate() {
        for &k in k_grid {
            let mode = ModeIndex::new(channel, k)?;
            let omega = checked_omega(&mode, medium, beta, s)?;
            ln_z += 2.0 * (2.0 * PI / (beta * omega)).ln();
        }
    }
    Ok(ln_z)
}

/// Mean energy `E = −∂ ln Z/∂β`, evaluated in closed form:
/// `(3/2)NT + 2MT − Σ_{s,k} (c²/ω²)(nγ²/(2ϰ))`, where `M` counts the modes.
pub fn classical_energy(
    channels: &[FieldChannel],
    medium: &Medium,
    beta: f64,
    k_grid: &[f64],
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let t = 1.0 / beta;
    let modes = (channels.len() * k_grid.len()) as f64;
    let mut correction = 0.0;
    for (s, channel) in channels.iter().enumerate() {
        let shift = channel.coupling_strength(medium);
        for &k in k_grid {
            let mode = ModeIndex::new(channel, k)?;
            let omega = checked_omega(&mode, medium, beta, s)?;
            correction += 2.0 * medium.c * medium.c / (2.0 * omega * omega) * shift;
        }
    }
    Ok(1.5 * medium.n() * t + 2.0 * modes * t - correction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_medium() -> Medium {
        Medium::new(1, 1.0, 1.0).unwrap()
    }

    #[test]
    fn channel_validation() {
        assert!(FieldChannel::new(0.0, 1.0, 1.0).is_err());
        assert!(FieldChannel::new(1.0, -1.0, 1.0).is_err());
        assert!(FieldChannel::new(1.0, 1.0, f64::NAN).is_err());
        assert!(Medium::new(0, 1.0, 1.0).is_err());
        assert!(Medium::with_units(1, 1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn derived_scales() {
        let medium = Medium::with_units(8, 2.0, 1.0, 0.5, 3.0).unwrap();
        let ch = FieldChannel::new(2.0, 1.5, 0.7).unwrap();
        assert_eq!(ch.t_char(&medium), 0.5 * 3.0 * 2.0);
        let alpha = 4.0 * 0.49 / (2.0 * 1.5 * 1.5 * 8.0);
        assert!((ch.alpha(&medium) - alpha).abs() < 1e-15);
        // α T_s = T_crit
        let lhs = ch.alpha(&medium) * ch.t_char(&medium);
        assert!((lhs / ch.critical_temperature(&medium) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dispersion_examples() {
        let m = unit_medium();
        let free = FieldChannel::new(1.0, 1.0, 0.0).unwrap();
        let mode = ModeIndex::new(&free, 0.0).unwrap();
        assert_eq!(dispersion(&mode, &m, 3.0).unwrap(), 1.0);

        let ch = FieldChannel::new(1.0, 1.0, 1.0).unwrap();
        // nβγ²/(2ϰ) = μ² at β = 2
        let mode = ModeIndex::new(&ch, 0.0).unwrap();
        assert_eq!(dispersion(&mode, &m, 2.0).unwrap(), 0.0);
        assert!(matches!(
            dispersion(&mode, &m, 2.5),
            Err(Error::Subcritical(_))
        ));

        let mode = ModeIndex::new(&ch, 1.0).unwrap();
        assert!((dispersion(&mode, &m, 1.0).unwrap() - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn renormalized_mass_examples() {
        let m = unit_medium();
        let ch = FieldChannel::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(renormalized_mass(&ch, &m, 0.0).unwrap(), 2.0);
        // nβγ²/(2ϰ) = 1 at β = 2
        assert!((renormalized_mass(&ch, &m, 2.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(renormalized_mass(&ch, &m, 8.0).unwrap(), 0.0);
        assert!(renormalized_mass(&ch, &m, 8.5).is_err());
    }

    #[test]
    fn critical_temperature_examples() {
        let m = unit_medium();
        let ch = FieldChannel::new(1.0, 1.0, 1.0).unwrap();
        let t = critical_temperature(&[ch], &m).unwrap();
        assert_eq!(t.per_channel, vec![0.5]);
        assert_eq!(t.global, 0.5);

        let free = FieldChannel::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(critical_temperature(&[free, free], &m).unwrap().global, 0.0);

        // γ² = 0.4 → 0.2, γ² = 1 → 0.5
        let weak = FieldChannel::new(1.0, 1.0, 0.4f64.sqrt()).unwrap();
        let t = critical_temperature(&[weak, ch], &m).unwrap();
        assert!((t.per_channel[0] - 0.2).abs() < 1e-15);
        assert_eq!(t.global, 0.5);
        assert!((t.weakest - 0.2).abs() < 1e-15);

        assert!(critical_temperature(&[], &m).is_err());
    }

    #[test]
    fn criticality_matches_radicand_sign() {
        let m = Medium::new(10, 4.0, 1.0).unwrap();
        for &(mu, kappa, gamma) in &[(1.0, 1.0, 1.0), (0.5, 2.0, 0.3), (3.0, 0.2, 2.0)] {
            let ch = FieldChannel::new(mu, kappa, gamma).unwrap();
            let tc = ch.critical_temperature(&m);
            for factor in [0.5, 0.9, 0.999, 1.001, 1.1, 3.0] {
                let t = tc * factor;
                let mode = ModeIndex::new(&ch, 0.0).unwrap();
                assert_eq!(mode.radicand(&m, 1.0 / t) > 0.0, t > tc, "T/Tc = {factor}");
            }
        }
    }

    #[test]
    fn quadratic_partition_examples() {
        let m = unit_medium();
        let ch = FieldChannel::new(1.0, 1.0, 1.0).unwrap();
        let mode = ModeIndex::new(&ch, 1.0).unwrap();
        let z = mode_partition_quadratic(&mode, &m, 1.0).unwrap();
        assert!((z - 26.318_945_069_571_623).abs() < 1e-12);

        // ω = 2π at β = 1 gives Z = 1
        let free = FieldChannel::new(2.0 * PI, 1.0, 0.0).unwrap();
        let mode = ModeIndex::new(&free, 0.0).unwrap();
        assert!((mode_partition_quadratic(&mode, &m, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_partition_decoupled_is_gaussian() {
        let m = Medium::new(50, 20.0, 1.0).unwrap();
        let ch = FieldChannel::new(1.3, 0.8, 0.0).unwrap();
        let mode = ModeIndex::new(&ch, 0.4).unwrap();
        let beta = 0.7;
        let exact = mode_partition_exact(&mode, &m, beta, &QuadratureSpec::default()).unwrap();
        // (2πVϰ/(βc²)) · π/A with A = βNϰ(k²+μ²)/(2n)
        let a = beta * 50.0 * 0.8 * (0.16 + 1.69) / (2.0 * 2.5);
        let closed = (2.0 * PI * 20.0 * 0.8 / beta).ln() + (PI / a).ln();
        assert!((exact - closed).abs() < 1e-10);
        let quad = mode_partition_quadratic(&mode, &m, beta).unwrap().ln();
        assert!((exact - quad).abs() < 1e-10);
    }

    #[test]
    fn exact_partition_rejects_subcritical() {
        let m = unit_medium();
        let ch = FieldChannel::new(1.0, 1.0, 1.0).unwrap();
        let mode = ModeIndex::new(&ch, 0.0).unwrap();
        let r = mode_partition_exact(&mode, &m, 2.0, &QuadratureSpec::default());
        assert!(matches!(r, Err(Error::Subcritical(_))));
    }

    #[test]
    fn ln_factorial_stirling_branch() {
        let exact_21: f64 = (2..=21).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(21) / exact_21 - 1.0).abs() < 1e-12);
        let exact_100: f64 = (2..=100).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(100) / exact_100 - 1.0).abs() < 1e-13);
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
    }

    #[test]
    fn log_partition_without_channels_is_ideal_gas() {
        let m = Medium::new(30, 7.0, 2.0).unwrap();
        let beta = 0.4;
        let ln_z = classical_log_partition(&[], &m, beta, &[1.0, 2.0]).unwrap();
        let expect = 30.0 * 7f64.ln() - ln_factorial(30) + 45.0 * (2.0 * PI * 2.0 / beta).ln();
        assert!((ln_z - expect).abs() < 1e-12);
        let e = classical_energy(&[], &m, beta, &[1.0, 2.0]).unwrap();
        assert!((e - 1.5 * 30.0 / beta).abs() < 1e-12);
    }

    #[test]
    fn log_partition_single_mode_composes() {
        let m = Medium::new(3, 2.0, 1.0).unwrap();
        let ch = FieldChannel::new(1.0, 1.0, 0.5).unwrap();
        let beta = 0.8;
        let ln_z = classical_log_partition(&[ch], &m, beta, &[0.7]).unwrap();
        let mode = ModeIndex::new(&ch, 0.7).unwrap();
        let z_mode = mode_partition_quadratic(&mode, &m, beta).unwrap();
        let expect = ideal_gas_log_partition(&m, beta) + z_mode.ln();
        assert!((ln_z - expect).abs() < 1e-12);
    }

    #[test]
    fn log_partition_is_additive_over_grids() {
        let m = Medium::new(12, 5.0, 1.0).unwrap();
        let chs = [
            FieldChannel::new(1.0, 1.0, 0.5).unwrap(),
            FieldChannel::new(2.5, 0.5, 0.9).unwrap(),
        ];
        let beta = 0.9;
        let a = [0.3, 1.1, 2.0];
        let b = [0.5, 4.0];
        let union: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
        let ideal = ideal_gas_log_partition(&m, beta);
        let lhs = classical_log_partition(&chs, &m, beta, &union).unwrap();
        let rhs = classical_log_partition(&chs, &m, beta, &a).unwrap()
            + classical_log_partition(&chs, &m, beta, &b).unwrap()
            - ideal;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn subcritical_mode_is_named() {
        let m = unit_medium();
        let chs = [
            FieldChannel::new(5.0, 1.0, 0.1).unwrap(),
            FieldChannel::new(1.0, 1.0, 1.0).unwrap(),
        ];
        let msg = classical_log_partition(&chs, &m, 4.0, &[0.5])
            .unwrap_err()
            .to_string();
        assert!(msg.contains("s = 1") && msg.contains("k = 0.5"), "{msg}");
        assert!(classical_energy(&chs, &m, 4.0, &[0.5]).is_err());
    }

    #[test]
    fn energy_is_minus_log_partition_slope() {
        let m = Medium::new(4, 3.0, 1.0).unwrap();
        let ch = FieldChannel::new(1.0, 1.0, 0.8).unwrap();
        let grid = [0.6];
        let beta = 1.1;
        let e = classical_energy(&[ch], &m, beta, &grid).unwrap();
        let slope = crate::numerics::derivative(
            |b| classical_log_partition(&[ch], &m, b, &grid),
            beta,
            beta,
        )
        .unwrap();
        assert!((e / -slope - 1.0).abs() < 1e-6, "{e} vs {}", -slope);
    }

    #[test]
    fn decoupled_energy_counts_modes() {
        let m = Medium::new(5, 8.0, 1.0).unwrap();
        let ch = FieldChannel::new(1.0, 1.0, 0.0).unwrap();
        let t = 2.0;
        let e10 = classical_energy(&[ch], &m, 1.0 / t, &default_k_grid(&m, 10)).unwrap();
        let e20 = classical_energy(&[ch], &m, 1.0 / t, &default_k_grid(&m, 20)).unwrap();
        assert!((e20 - e10 - 2.0 * 10.0 * t).abs() < 1e-12);
    }

    #[test]
    fn static_potential_signs() {
        let ch = FieldChannel::new(1.0, 1.0, (4.0 * PI).sqrt()).unwrap();
        assert!((ch.static_potential(1.0) - (-1f64).exp()).abs() < 1e-15);
        let att = ch.with_sign(CouplingSign::Attractive);
        assert!((att.static_potential(1.0) + (-1f64).exp()).abs() < 1e-15);
    }
}
