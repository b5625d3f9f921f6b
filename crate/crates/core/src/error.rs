use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("value overflows double precision (log magnitude {log_magnitude:.1})")]
    Overflow { log_magnitude: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("Gram matrix is ill-conditioned (condition number {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("matrix dimension {size} exceeds the cap {cap}")]
    SizeLimit { size: usize, cap: usize },

    #[error("truncated norm not converged: {current} at N = {n}, {previous} at N = {n_prev}")]
    NotConverged {
        n: usize,
        n_prev: usize,
        current: f64,
        previous: f64,
    },

    #[error("polynomial division left residual {residual:.3e}")]
    Singular { residual: f64 },

    #[error("invalid symbol description: {0}")]
    Symbol(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(err: std::io::Error) -> Self {
        LabError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(err: serde_json::Error) -> Self {
        LabError::Symbol(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Domain(msg.into()))
}
