use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("zero pivot in tridiagonal solve on line {line}")]
    ZeroPivot { line: usize },

    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("quadrature did not reach tolerance (last relative change {delta:.3e})")]
    Quadrature { delta: f64 },

    #[error("low-wavenumber constant routes disagree at ({x}, {y}): quadrature {quadrature:.16e}, operator {operator:.16e}")]
    RouteMismatch {
        x: f64,
        y: f64,
        quadrature: f64,
        operator: f64,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
