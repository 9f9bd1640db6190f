use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("axis vector has norm {0:e}, below the 1e-9 floor")]
    ZeroAxis(f64),

    #[error("coefficient index {k} out of range for two_j = {two_j}")]
    IndexOutOfRange { k: usize, two_j: u32 },

    #[error("central factorial magnitudes are defined for integer spin only (two_j = {0})")]
    HalfIntegerSpin(u32),

    #[error("resolvent is singular: |det| = {det:e} against threshold {threshold:e}")]
    SingularResolvent { det: f64, threshold: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} after {intervals} subintervals")]
    QuadratureNotConverged { estimate: f64, intervals: usize },

    #[error("invalid spin label {input:?}: {reason}")]
    InvalidSpin { input: String, reason: &'static str },

    #[error("invalid axis {input:?}: {reason}")]
    InvalidAxis { input: String, reason: &'static str },

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
