//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by evaluators, oracles and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (NaN, `t <= 0`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Problem parameters violate the ordering or sign hypotheses.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A quantity is not representable in `f64`; reported instead of returning `inf`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A direct evaluation lost too many significant digits to cancellation.
    #[error("cancellation: {0}")]
    Cancellation(String),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate:e} above tolerance {tolerance:e} after {subdivisions} subdivisions")]
    Quadrature {
        estimate: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    /// Finite-difference solver rejected its grid or produced a non-finite state.
    #[error("finite-difference solver: {0}")]
    FiniteDifference(String),

    /// A probe point sits too close to a region boundary for the requested check.
    #[error("point ({x}, {t}) lies within {distance:e} of a region boundary (margin {margin:e})")]
    NearBoundary {
        x: f64,
        t: f64,
        distance: f64,
        margin: f64,
    },

    /// Invalid run configuration (command line or JSON file).
    #[error("configuration error: {0}")]
    Config(String),

    /// Input/output failure while writing artifacts.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
