//! Modified Bessel function of the first kind, order zero.
//!
//! Below [`SERIES_LIMIT`] the ascending series `Σ (x/2)^{2m} / (m!)²` is
//! summed in double-double; every term is positive so there is no
//! cancellation.
//! Above it the Hankel asymptotic expansion
//! `I₀(x) ≈ eˣ/√(2πx) · Σ_k ((2k-1)!!)² / (k! (8x)^k)` is used, which for
//! `x > 30` reaches machine precision long before its terms start to grow.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 30.0;

/// Sum of the ascending-series terms with `m ≥ 1`, i.e. `I₀(x) - 1`.
fn series_tail(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut m = 1.0;
    loop {
        term *= q / (m * m);
        sum += term;
        if term <= sum * 1e-17 || m > 500.0 {
            return sum;
        }
        m += 1.0;
    }
}

/// `Σ_k a_k / x^k` from the large-argument expansion, so that
/// `I₀(x) = eˣ/√(2πx) · asymptotic_sum(x)`.
fn asymptotic_sum(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Unevaluated sum `hi + lo` carrying about 106 bits.
#[derive(Debug, Clone, Copy)]
struct Wide {
    hi: f64,
    lo: f64,
}

impl Wide {
    fn quick(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Wide {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, other: Wide) -> Self {
        let s = self.hi + other.hi;
        let v = s - self.hi;
        let e = (self.hi - (s - v)) + (other.hi - v);
        Wide::quick(s, e + self.lo + other.lo)
    }

    fn mul(self, other: Wide) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        Wide::quick(p, e + self.hi * other.lo + self.lo * other.hi)
    }

    fn div_f64(self, d: f64) -> Self {
        let q = self.hi / d;
        let p = q * d;
        let pe = q.mul_add(d, -p);
        Wide::quick(q, ((self.hi - p) - pe + self.lo) / d)
    }
}

/// Ascending series summed in double-double so that the result is within
/// about half an ulp of `I₀(x)`.
fn series_wide(x: f64) -> f64 {
    let xx = x * x;
    let q = Wide {
        hi: 0.25 * xx,
        lo: 0.25 * x.mul_add(x, -xx),
    };
    let mut term = Wide { hi: 1.0, lo: 0.0 };
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term = term.mul(q).div_f64(m * m);
        sum = sum.add(term);
        if term.hi <= sum.hi * 1e-34 || m > 500.0 {
            return sum.hi + sum.lo;
        }
        m += 1.0;
    }
}

/// `I₀(x)`.
///
/// For `x ≤ 30` the series is accumulated in double-double and the result
/// is within about half an ulp; beyond that the asymptotic form keeps the
/// relative error below `1e-15`. The function is even, so the sign of `x`
/// is ignored. Overflows to `+∞` for `x ≳ 713`; use [`ln_bessel_i0`] there.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        series_wide(x)
    } else {
        (x - 0.5 * (2.0 * PI * x).ln()).exp() * asymptotic_sum(x)
    }
}

/// `ln I₀(x)`, finite for every finite `x`.
///
/// Near zero this is `x²/4 - x⁴/64 + …`; for large arguments it approaches
/// `x - ½ ln(2πx)`.
pub fn ln_bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        series_tail(x).ln_1p()
    } else {
        x - 0.5 * (2.0 * PI * x).ln() + asymptotic_sum(x).ln()
    }
}

/// `e^{-x} I₀(x)`, bounded by one for all `x ≥ 0`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        (-x).exp() * (1.0 + series_tail(x))
    } else {
        asymptotic_sum(x) / (2.0 * PI * x).sqrt()
    }
}
