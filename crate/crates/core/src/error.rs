use thiserror::Error;

/// Errors raised by the form algebra, the operators and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("inadmissible parameters: {0}")]
    Admissibility(String),

    #[error("kernel singularity: {0}")]
    Singularity(String),

    #[error("map not supported on the exact path: {0}")]
    UnsupportedMap(String),

    #[error("form is not closed")]
    NotClosed,

    #[error("no convergence after {iterations} iterations (gradient residual {residual:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        /// Gauge coefficients of the best iterate found.
        best_coefficients: Vec<f64>,
        best_energy: f64,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
