use thiserror::Error;

/// Failures raised by the library. The variants map onto the CLI exit codes:
/// `Parse` → 2, `Shape`/`Validation`/`DimensionMismatch` → 3, the rest → 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("informationally incomplete projector set: Gram rank {rank} of required {required} (deficit {})", required - rank)]
    RankDeficit { rank: usize, required: usize },

    #[error("unsupported structure: {0}")]
    Unsupported(String),

    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Shape(_) | Error::Validation(_) | Error::DimensionMismatch { .. } => 3,
            Error::RankDeficit { .. } | Error::Unsupported(_) | Error::Consistency(_) => 4,
        }
    }
}
