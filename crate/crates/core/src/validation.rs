//! Cross-validation of the analytic shortcuts against [`crate::oracle`].
//!
//! Every check runs regardless of earlier failures and reports its worst
//! observed deviation next to its tolerance.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{
    field_gaussian_width, mode_partition_exact, mode_partition_quadratic, single_mode_y,
    FieldChannel, Medium, ModeIndex,
};
use crate::error::Result;
use crate::numerics::{bessel_i0, find_root, integrate_semi_infinite, QuadratureSpec};
use crate::oracle::{
    i0_series, i0_series_terms, mode_partition_grid, weyl_ergodic_average, y_integral_grid,
    GridSpec, WEYL_WAVENUMBERS,
};
use crate::quantum::{
    density_of_states, energy_integrand_correction, f_integrand, harmonic_correction,
    mode_thermal_energy_q, Prefactor, STEFAN_BOLTZMANN_INTEGRAL,
};

/// Knobs for [`run_all`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Factor applied to every `I₀` value under test; anything but `1`
    /// injects a fault the suite must catch.
    pub bessel_scale: f64,
    pub grid: GridSpec,
    pub quadrature: QuadratureSpec,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed_a0f1,
            bessel_scale: 1.0,
            grid: GridSpec::default(),
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Where the worst deviation occurred, or why the check could not run.
    pub detail: String,
}

impl Check {
    fn measured(name: &'static str, deviation: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
            detail,
        }
    }

    fn from_result(name: &'static str, tolerance: f64, r: Result<(f64, String)>) -> Self {
        match r {
            Ok((dev, detail)) => Self::measured(name, dev, tolerance, detail),
            Err(e) => Self {
                name,
                deviation: f64::NAN,
                tolerance,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<22} deviation {:.3e} (tolerance {:.1e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.deviation,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Names of the checks, in report order.
pub const CHECK_NAMES: [&str; 10] = [
    "weyl-bessel",
    "bessel-series",
    "stefan-boltzmann",
    "partition-grid",
    "partition-quadratic",
    "ergodic-one-frequency",
    "ergodic-two-frequency",
    "correction-identity",
    "integrand-identity",
    "critical-temperature",
];

/// `|single_mode_y(x) − grid|` over `samples` random `x ∈ [0, 20]`.
pub fn weyl_bessel_deviation(samples: usize, opts: &ValidationOptions) -> (f64, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = (0.0, 0.0);
    for _ in 0..samples {
        let x = rng.random_range(0.0..20.0);
        let y = opts.bessel_scale * single_mode_y(x);
        let dev = (y - y_integral_grid(x, &opts.grid).value).abs();
        if dev > worst.1 {
            worst = (x, dev);
        }
    }
    (worst.1, format!("worst at x = {}", worst.0))
}

fn bessel_series_deviation(opts: &ValidationOptions) -> (f64, String) {
    let mut worst = (0.0, 0.0);
    for i in 0..=200 {
        let x = 0.25 * i as f64;
        let reference = i0_series(x, i0_series_terms(x)).value;
        let dev = (opts.bessel_scale * bessel_i0(x) / reference - 1.0).abs();
        if dev > worst.1 {
            worst = (x, dev);
        }
    }
    (worst.1, format!("relative, worst at x = {}", worst.0))
}

fn stefan_boltzmann_deviation(opts: &ValidationOptions) -> Result<(f64, String)> {
    let r = integrate_semi_infinite(
        |q| {
            if q == 0.0 {
                0.0
            } else {
                q * q * q / q.exp_m1()
            }
        },
        &opts.quadrature,
    )?;
    let dev = (r.value / STEFAN_BOLTZMANN_INTEGRAL - 1.0).abs();
    Ok((dev, format!("relative, value {}", r.value)))
}

/// A mode whose convergence ratio `nβγ²/(2ϰ(k² + μ²))` equals `rho`.
struct ModeDraw {
    medium: Medium,
    channel: FieldChannel,
    k: f64,
    beta: f64,
}

fn draw_mode(rng: &mut ChaCha8Rng, max_atoms: u64, rho: f64) -> Result<ModeDraw> {
    let n_atoms = rng.random_range(1..=max_atoms);
    let volume = rng.random_range(0.5..20.0);
    let medium = Medium::new(n_atoms, volume, 1.0)?;
    let mu = rng.random_range(0.2..3.0);
    let kappa = rng.random_range(0.5..2.0);
    let k = rng.random_range(0.0..2.0);
    let beta = rng.random_range(0.2..3.0);
    let bare = k * k + mu * mu;
    let gamma = (rho * 2.0 * kappa * bare / (medium.density() * beta)).sqrt();
    let channel = FieldChannel::new(mu, kappa, gamma)?;
    Ok(ModeDraw {
        medium,
        channel,
        k,
        beta,
    })
}

/// Worst relative `ln Z` gap between the radial reduction and the 2-D grid
/// for `draws` random systems with `N ≤ 10`.
pub fn partition_grid_deviation(draws: usize, opts: &ValidationOptions) -> Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37);
    let mut worst = (0.0, String::new());
    for _ in 0..draws {
        let rho = rng.random_range(0.05..0.8);
        let d = draw_mode(&mut rng, 10, rho)?;
        let mode = ModeIndex::new(&d.channel, d.k)?;
        let exact = mode_partition_exact(&mode, &d.medium, d.beta, &opts.quadrature)?;
        let grid = mode_partition_grid(&mode, &d.medium, d.beta, &opts.grid)?.value;
        let dev = ((exact - grid) / grid).abs();
        if dev > worst.0 {
            worst = (
                dev,
                format!(
                    "worst at N = {}, rho = {rho:.3}, ln Z = {grid}",
                    d.medium.n_atoms
                ),
            );
        }
    }
    Ok(worst)
}

/// Worst `|ln Z_exact − ln Z_quadratic|` with the coupling scaled so that
/// `βγσ ≤ 0.05`.
pub fn partition_quadratic_deviation(
    draws: usize,
    opts: &ValidationOptions,
) -> Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x51ab);
    let mut worst = (0.0, String::new());
    for _ in 0..draws {
        let rho = rng.random_range(0.001..0.5);
        let mut d = draw_mode(&mut rng, 50, rho)?;
        let mode = ModeIndex::new(&d.channel, d.k)?;
        let sigma = field_gaussian_width(&mode, &d.medium, d.beta);
        let strength = d.beta * d.channel.gamma * sigma;
        if strength > 0.05 {
            let gamma = d.channel.gamma * 0.05 / strength;
            d.channel = FieldChannel::new(d.channel.mu, d.channel.kappa, gamma)?;
        }
        let mode = ModeIndex::new(&d.channel, d.k)?;
        let exact = mode_partition_exact(&mode, &d.medium, d.beta, &opts.quadrature)?;
        let quad = mode_partition_quadratic(&mode, &d.medium, d.beta)?.ln();
        let dev = (exact - quad).abs();
        if dev > worst.0 {
            worst = (dev, format!("worst at N = {}", d.medium.n_atoms));
        }
    }
    Ok(worst)
}

/// `|line average − Π I₀(x_j)|` over `L = 10⁴` with the first `x.len()`
/// default wavenumbers.
pub fn ergodic_deviation(x: &[f64], opts: &ValidationOptions) -> Result<(f64, String)> {
    let k = &WEYL_WAVENUMBERS[..x.len()];
    let avg = weyl_ergodic_average(x, k, 1e4)?;
    let product: f64 = x
        .iter()
        .map(|&xi| opts.bessel_scale * bessel_i0(xi))
        .product();
    Ok((
        (avg.value - product).abs(),
        format!("x = {x:?}, line average {}", avg.value),
    ))
}

/// The mode-energy correction written through `ω` versus through the bare
/// parameters, over `draws` admissible random draws.
pub fn correction_identity_deviation(
    draws: usize,
    opts: &ValidationOptions,
) -> Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc0de);
    let mut worst = 0.0_f64;
    for _ in 0..draws {
        let rho = rng.random_range(0.01..0.95);
        let d = draw_mode(&mut rng, 1000, rho)?;
        let mode = ModeIndex::new(&d.channel, d.k)?;
        let a = harmonic_correction(&mode, &d.medium, d.beta)?;
        let b = energy_integrand_correction(&mode, &d.medium, 1.0 / d.beta);
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok((worst, format!("{draws} draws")))
}

/// The dimensionless `f` integrand against the `k`-space energy density
/// with `Q = βħck`: `P·T⁴·f_integrand(α, τ, Q) = D(k)·ε(k)·dk/dQ`.
pub fn integrand_identity_deviation(
    draws: usize,
    opts: &ValidationOptions,
) -> Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x1d3a);
    let mut worst = 0.0_f64;
    for _ in 0..draws {
        let n_atoms = rng.random_range(1..=1000);
        let medium = Medium::with_units(
            n_atoms,
            rng.random_range(0.5..50.0),
            1.0,
            rng.random_range(0.5..2.0),
            rng.random_range(0.5..2.0),
        )?;
        let channel = FieldChannel::new(
            rng.random_range(0.2..3.0),
            rng.random_range(0.5..2.0),
            rng.random_range(0.0..0.5),
        )?;
        let t_crit = channel.critical_temperature(&medium);
        let t_s = channel.t_char(&medium);
        let temperature = t_crit.max(0.05 * t_s) * rng.random_range(1.05..5.0);
        let q = rng.random_range(0.01..10.0);
        let hbar_c = medium.hbar * medium.c;
        let k = q * temperature / hbar_c;
        let mode = ModeIndex::new(&channel, k)?;

        let dimensioned = density_of_states(&medium, k)?
            * mode_thermal_energy_q(&mode, &medium, 1.0 / temperature)?
            * temperature
            / hbar_c;
        let alpha = channel.alpha(&medium);
        let tau = temperature / t_s;
        let reduced =
            Prefactor::Dos.coefficient(&medium) * temperature.powi(4) * f_integrand(alpha, tau, q);
        worst = worst.max((dimensioned / reduced - 1.0).abs());
    }
    Ok((worst, format!("{draws} draws, relative")))
}

/// `T_crit` from a root of `μ² − nγ²/(2ϰT)` against the closed form.
pub fn critical_temperature_deviation(opts: &ValidationOptions) -> Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x7c17);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let medium = Medium::new(
            rng.random_range(1..=10_000),
            rng.random_range(0.5..50.0),
            1.0,
        )?;
        let channel = FieldChannel::new(
            rng.random_range(0.1..3.0),
            rng.random_range(0.5..2.0),
            rng.random_range(0.01..1.0),
        )?;
        let closed = channel.critical_temperature(&medium);
        let mode = ModeIndex::new(&channel, 0.0)?;
        let root = find_root(
            |t| mode.radicand(&medium, 1.0 / t),
            closed * 1e-3,
            closed * 1e3,
        )?;
        worst = worst.max((root / closed - 1.0).abs());
    }
    Ok((worst, "relative, 20 channels".to_string()))
}

/// Runs every check; failures never stop later checks.
pub fn run_all(opts: &ValidationOptions) -> ValidationReport {
    let (dev, detail) = weyl_bessel_deviation(200, opts);
    let mut checks = vec![Check::measured(CHECK_NAMES[0], dev, 1e-8, detail)];
    let (dev, detail) = bessel_series_deviation(opts);
    checks.push(Check::measured(CHECK_NAMES[1], dev, 1e-10, detail));
    checks.push(Check::from_result(
        CHECK_NAMES[2],
        1e-8,
        stefan_boltzmann_deviation(opts),
    ));
    checks.push(Check::from_result(
        CHECK_NAMES[3],
        1e-4,
        partition_grid_deviation(12, opts),
    ));
    checks.push(Check::from_result(
        CHECK_NAMES[4],
        1e-3,
        partition_quadratic_deviation(50, opts),
    ));
    checks.push(Check::from_result(
        CHECK_NAMES[5],
        1e-2,
        ergodic_deviation(&[1.0], opts),
    ));
    checks.push(Check::from_result(
        CHECK_NAMES[6],
        2e-2,
        ergodic_deviation(&[1.0, 1.0], opts),
    ));
    checks.push(Check::from_result(
        CHECK_NAMES[7],
        1e-10,
        correction_identity_deviation(100, opts),
    ));
    checks.push(Check::from_result(
        CHECK_NAMES[8],
        1e-10,
        integrand_identity_deviation(100, opts),
    ));
    checks.push(Check::from_result(
        CHECK_NAMES[9],
        1e-9,
        critical_temperature_deviation(opts),
    ));
    ValidationReport { checks }
}
