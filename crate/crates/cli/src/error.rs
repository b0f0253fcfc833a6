use thiserror::Error;

/// Failures of a command, each tied to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags, config or input files; exit code 2.
    #[error("usage error: {0}")]
    Usage(String),
    /// The computation ran but a check failed, or it could not complete;
    /// exit code 1.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<fobie_core::Error> for CliError {
    fn from(e: fobie_core::Error) -> Self {
        use fobie_core::Error as E;
        match e {
            E::InvalidInput(_) | E::Domain(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}
