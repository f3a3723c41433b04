//! Brute-force reference evaluations.
//!
//! Nothing here calls into [`crate::numerics`] or the analytic reductions in
//! [`crate::classical`]: Bessel values come from [`i0_series`], integrals
//! from plain trapezoid and Simpson sums. Every result carries the
//! difference between two resolutions as a self-convergence estimate.

use std::f64::consts::PI;

use crate::classical::{check_convergence, FieldChannel, Medium, ModeIndex};
use crate::error::{Error, Result};

/// Resolution of a grid oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points_per_dim: usize,
    /// Half-width of the grid in units of the integrand's Gaussian width.
    pub extent: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points_per_dim: 16,
            extent: 8.0,
        }
    }
}

impl GridSpec {
    pub fn new(points_per_dim: usize, extent: f64) -> Result<Self> {
        if points_per_dim < 16 {
            return Err(Error::Config(format!(
                "grid needs at least 16 points per dimension, got {points_per_dim}"
            )));
        }
        if !(extent >= 5.0) {
            return Err(Error::Config(format!(
                "grid extent must be at least 5, got {extent}"
            )));
        }
        Ok(Self {
            points_per_dim,
            extent,
        })
    }
}

/// An oracle value and the change observed when the resolution is halved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub self_convergence: f64,
}

/// Kahan-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `Σ_{m<terms} (x/2)^{2m}/(m!)²`, the truncated ascending series of `I₀`.
pub fn i0_series(x: f64, terms: usize) -> OracleValue {
    let q = 0.25 * x * x;
    let mut acc = Compensated::default();
    let mut term = 1.0;
    let mut last = 0.0;
    for m in 0..terms {
        if m > 0 {
            term *= q / ((m * m) as f64);
        }
        acc.add(term);
        last = term;
    }
    OracleValue {
        value: acc.sum,
        self_convergence: last,
    }
}

/// Enough series terms for double precision at argument `x`.
pub fn i0_series_terms(x: f64) -> usize {
    30 + (2.0 * x.abs()).ceil() as usize
}

/// Double-double value `hi + lo`, private to the oracles.
#[derive(Debug, Clone, Copy)]
struct Pair {
    hi: f64,
    lo: f64,
}

impl Pair {
    fn from(x: f64) -> Self {
        Pair { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Pair {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn plus(self, o: Pair) -> Self {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb);
        Pair::renorm(s, err + self.lo + o.lo)
    }

    fn times(self, o: Pair) -> Self {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        Pair::renorm(p, err + self.hi * o.lo + self.lo * o.hi)
    }

    fn over(self, d: f64) -> Self {
        let q = self.hi / d;
        let p = q * d;
        let err = q.mul_add(d, -p);
        Pair::renorm(q, ((self.hi - p) - err + self.lo) / d)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// `eˣ` in double-double: Taylor series at `x/2¹⁰`, then ten squarings.
fn exp_pair(x: f64) -> Pair {
    let r = x / 1024.0;
    let mut term = Pair::from(1.0);
    let mut sum = term;
    for i in 1..40 {
        term = term.times(Pair::from(r)).over(i as f64);
        sum = sum.plus(term);
        if term.hi.abs() < 1e-34 * sum.hi.abs() {
            break;
        }
    }
    for _ in 0..10 {
        sum = sum.times(sum);
    }
    sum
}

/// Trapezoid mean of `exp(−x cos 2πz)` over `n` nodes.
///
/// Written as `eˣ · mean exp(−x(1 + cos 2πz))` with
/// `1 + cos 2πz_j = 2 sin²(π(j − n/2)/n)`, so that the dominant nodes near
/// `z = ½` keep full relative accuracy in their exponents.
fn periodic_trapezoid(x: f64, n: usize) -> f64 {
    let half = (n / 2) as i64;
    let mut acc = Pair::from(0.0);
    for j in 0..n as i64 {
        let s = (PI * (j - half) as f64 / n as f64).sin();
        let lift = 2.0 * s * s;
        acc = acc.plus(Pair::from((-x * lift).exp()));
    }
    exp_pair(x).times(acc.over(n as f64)).value()
}

/// `∫₀¹ exp(−x cos 2πz) dz` by the trapezoid rule on `points_per_dim²`
/// equally spaced nodes; the integrand is periodic, so convergence is
/// geometric.
pub fn y_integral_grid(x: f64, grid: &GridSpec) -> OracleValue {
    let n = grid.points_per_dim * grid.points_per_dim;
    let fine = periodic_trapezoid(x, n);
    let coarse = periodic_trapezoid(x, n / 2);
    OracleValue {
        value: fine,
        self_convergence: (fine - coarse).abs(),
    }
}

/// `ln Σ exp(terms)` over a 2-D trapezoid grid with spacing `stride·h`.
fn log_grid_sum<F: Fn(f64) -> f64>(exponent: &F, n: usize, half_width: f64, stride: usize) -> f64 {
    let h = 2.0 * half_width / (n - 1) as f64;
    let coords: Vec<f64> = (0..n)
        .step_by(stride)
        .map(|i| -half_width + i as f64 * h)
        .collect();
    let weight = |i: usize| {
        if i == 0 || i == coords.len() - 1 {
            0.5
        } else {
            1.0
        }
    };
    // exponent(r²) is largest at the origin
    let shift = exponent(0.0);
    let mut acc = Compensated::default();
    for (i, &psi) in coords.iter().enumerate() {
        for (j, &chi) in coords.iter().enumerate() {
            let r2 = psi * psi + chi * chi;
            acc.add(weight(i) * weight(j) * (exponent(r2) - shift).exp());
        }
    }
    let cell = (h * stride as f64).powi(2);
    shift + (acc.sum * cell).ln()
}

/// `ln Z_s(k)` with the `(ψ, χ)` double integral evaluated on a tensor
/// trapezoid grid and `ln I₀` taken from the series.
///
/// The grid half-width is `extent` times the width of the Gaussian that
/// bounds the integrand from above (`ln I₀(x) ≤ x²/4`). Meant for small
/// systems (`N ≲ 10`).
pub fn mode_partition_grid(
    mode: &ModeIndex,
    medium: &Medium,
    beta: f64,
    grid: &GridSpec,
) -> Result<OracleValue> {
    check_convergence(mode, medium, beta)?;
    let ch: &FieldChannel = mode.channel;
    let n_atoms = medium.n();
    let density = medium.density();
    let bare = mode.k * mode.k + ch.mu * ch.mu;
    let a = beta * n_atoms * ch.kappa * bare / (2.0 * density);
    let b = beta * ch.gamma.abs();
    let a_eff = a - n_atoms * b * b / 4.0;
    let half_width = grid.extent * (0.5 / a_eff).sqrt();

    let exponent = |r2: f64| {
        let x = b * r2.sqrt();
        let i0 = i0_series(x, i0_series_terms(x)).value;
        -a * r2 + n_atoms * i0.ln()
    };
    // odd point count so that halving keeps the endpoints
    let n = 2 * (grid.points_per_dim * 8) + 1;
    let fine = log_grid_sum(&exponent, n, half_width, 1);
    let coarse = log_grid_sum(&exponent, n, half_width, 2);

    let momentum = (2.0 * PI * medium.volume * ch.kappa / (beta * medium.c * medium.c)).ln();
    Ok(OracleValue {
        value: momentum + fine,
        self_convergence: (fine - coarse).abs(),
    })
}

fn line_average(x_list: &[f64], k_list: &[f64], length: f64, steps: usize) -> f64 {
    let h = length / steps as f64;
    let f = |t: f64| {
        let s: f64 = x_list
            .iter()
            .zip(k_list)
            .map(|(x, k)| x * (k * t).cos())
            .sum();
        (-s).exp()
    };
    let mut acc = Compensated::default();
    acc.add(f(0.0) + f(length));
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * f(i as f64 * h));
    }
    acc.sum * h / 3.0 / length
}

/// Default rationally independent wavenumbers.
pub const WEYL_WAVENUMBERS: [f64; 4] = [
    std::f64::consts::SQRT_2,
    1.732_050_807_568_877_2,
    2.236_067_977_499_79,
    2.645_751_311_064_590_7,
];

/// `(1/L)∫₀^L exp[−Σ_j x_j cos(k_j t)] dt` by composite Simpson.
///
/// For rationally independent `k_j` this tends to `Π_j I₀(x_j)` as
/// `L → ∞`, with an `O(1/L)` remainder.
pub fn weyl_ergodic_average(x_list: &[f64], k_list: &[f64], length: f64) -> Result<OracleValue> {
    if x_list.len() != k_list.len() || x_list.is_empty() || x_list.len() > 4 {
        return Err(Error::Domain(format!(
            "need 1 to 4 amplitudes with matching wavenumbers, got {} and {}",
            x_list.len(),
            k_list.len()
        )));
    }
    if !(length > 0.0) {
        return Err(Error::Domain(format!(
            "line length must be positive, got {length}"
        )));
    }
    let k_max = k_list.iter().fold(0.0_f64, |m, k| m.max(k.abs()));
    // ~200 nodes per shortest period
    let per_unit = (k_max / (2.0 * PI) * 200.0).max(1.0);
    let mut steps = (length * per_unit).ceil() as usize;
    steps += steps % 2;
    steps = steps.max(2);
    let fine = line_average(x_list, k_list, length, steps);
    let coarse = line_average(x_list, k_list, length, steps / 2 + (steps / 2) % 2);
    Ok(OracleValue {
        value: fine,
        self_convergence: (fine - coarse).abs(),
    })
}
