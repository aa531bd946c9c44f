use thiserror::Error;

/// Failures of a CLI command, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    /// Process exit code: 2 usage, 3 data, 4 numerical non-convergence.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<anchornn::Error> for CliError {
    fn from(e: anchornn::Error) -> Self {
        match e {
            anchornn::Error::InvalidInput(_) => CliError::Usage(e.to_string()),
            anchornn::Error::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            anchornn::Error::DimensionMismatch { .. } | anchornn::Error::Infeasible(_) => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
