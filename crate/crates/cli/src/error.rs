use thiserror::Error;

/// Failure classes of a run; each maps to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// An invariant or acceptance check did not hold.
    #[error("check failed: {0}")]
    Failed(String),

    #[error(transparent)]
    Core(#[from] rotor_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Failed(_) | CliError::Core(_) | CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}
