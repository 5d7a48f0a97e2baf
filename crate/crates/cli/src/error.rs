use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] logos_core::Error),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("LOGOS_ENTANGLE_THREADS must be a positive integer, got {0:?}")]
    Threads(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.exit_code() as u8,
            CliError::Read { .. } | CliError::Config { .. } => 2,
            CliError::Threads(_) => 3,
            CliError::Usage(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
