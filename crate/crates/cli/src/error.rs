use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bulletlab_core::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported schema '{found}', expected '{expected}'")]
    Schema { found: String, expected: &'static str },
    #[error("document labels disagree with geometry: {0}")]
    Labels(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;
