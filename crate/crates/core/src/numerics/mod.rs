//! Numerical kernels shared by the physics modules.

mod bessel;
mod diff;
mod quadrature;
mod roots;

pub use bessel::{bessel_i0, bessel_i0_scaled, ln_bessel_i0};
pub use diff::{
    derivative, derivative_bounded, derivative_central, derivative_central_above,
    derivative_forward, Derivative,
};
pub use quadrature::{integrate_interval, integrate_semi_infinite, QuadResult, QuadratureSpec};
pub use roots::{find_root, find_root_with, RootSpec};
