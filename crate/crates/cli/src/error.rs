use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the command-line front end, each with an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] subnormal_core::Error),

    #[error("invalid `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("golden file {path} not found; regenerate it with `subnormal golden --bootstrap --out {path}`")]
    GoldenMissing { path: PathBuf },

    #[error("malformed golden file {path}: {reason}")]
    GoldenMalformed { path: PathBuf, reason: String },

    #[error("verification mismatch: {0}")]
    Mismatch(String),

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn config(field: &'static str, reason: impl Into<String>) -> Self {
        CliError::Config { field, reason: reason.into() }
    }

    /// 0 success, 1 domain/parse error, 2 verification mismatch,
    /// 3 precision/quadrature failure.
    pub fn exit_code(&self) -> i32 {
        use subnormal_core::Error as E;
        match self {
            CliError::Core(E::Precision { .. } | E::Quadrature { .. }) => 3,
            CliError::Core(E::NegativeDensity { .. }) => 2,
            CliError::Mismatch(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
