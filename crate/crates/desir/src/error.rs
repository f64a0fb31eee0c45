use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: invalid JSON: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    /// A schema violation; the message names the offending field.
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] desir_core::Error),
}

impl CliError {
    pub fn schema(field: &str, message: impl std::fmt::Display) -> Self {
        CliError::Schema(format!("{field}: {message}"))
    }

    /// 2 for an incoherent model, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(desir_core::Error::Incoherent(_)) => 2,
            _ => 1,
        }
    }
}
