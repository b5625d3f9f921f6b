use focklab::LabError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Lab(#[from] LabError),
}

impl CliError {
    /// 1 for usage and configuration problems (including inputs the library
    /// rejects up front and truncations over the size caps), 3 for
    /// non-convergence, 2 for failures inside a computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Lab(LabError::Domain(_) | LabError::SizeLimit { .. } | LabError::Symbol(_)) => 1,
            CliError::Lab(LabError::NotConverged { .. }) => 3,
            CliError::Lab(_) => 2,
        }
    }
}
