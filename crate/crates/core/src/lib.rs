//! Relativistic statistical thermodynamics of atoms coupled through
//! auxiliary Klein-Gordon fields.
//!
//! The crate follows the model from the static pair potential to the heat
//! capacity:
//!
//! * [`potentials`]: a potential given as a sum of simple poles of its
//!   Fourier transform (a Yukawa superposition), and its decomposition into
//!   elementary field channels.
//! * [`classical`]: the classical partition function of atoms plus field,
//!   reduced to independent modes through the Bessel identity
//!   `∫₀¹ exp(-x cos 2πz) dz = I₀(x)`, with the temperature-dependent
//!   dispersion law, critical temperatures and the mode-cutoff energy.
//! * [`quantum`]: Bose statistics of the renormalized modes, the universal
//!   curve `f(α, τ)`, field energy and heat capacity.
//! * [`numerics`]: Bessel `I₀`, semi-infinite quadrature, Richardson
//!   differentiation and bracketing root finding.
//! * [`oracle`]: brute-force evaluations used to cross-check every analytic
//!   shortcut, and [`validation`] which runs them as a report.
//!
//! Temperatures are measured in energy units (`k_B = 1`). `ħ` and `c` are
//! carried by [`Medium`] and default to one.

pub mod classical;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod potentials;
pub mod quantum;
pub mod validation;

pub use classical::{CouplingSign, CriticalTemperatures, FieldChannel, Medium, ModeIndex};
pub use error::{Error, Result};
pub use numerics::{QuadResult, QuadratureSpec};
pub use oracle::{GridSpec, OracleValue};
pub use potentials::{KappaPolicy, PoleTerm, PotentialModel};
pub use quantum::{CurveSample, DerivativeMode, Prefactor, ThermoPoint};
