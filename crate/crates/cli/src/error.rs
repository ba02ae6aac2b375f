use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] dicke_mpemba::Error),
}

impl CliError {
    /// Process exit code: 2 for bad input, 3 for runtime failures. Failed
    /// invariant checks exit with 1 (see `main`).
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Core(dicke_mpemba::Error::InvalidArgument(_)) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
