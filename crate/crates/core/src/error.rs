use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The temperature is at or below a critical threshold, so the model is
    /// not applicable.
    #[error("subcritical temperature: {0}")]
    Subcritical(String),

    /// A finite-difference stencil would step across the left edge of the
    /// function's domain.
    #[error(
        "stencil point {point} crosses the domain boundary {boundary}; use one-sided differences"
    )]
    Boundary { point: f64, boundary: f64 },

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Convergence { estimate: f64, error_bound: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),
}
