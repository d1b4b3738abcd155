use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("instance generation failed for size {size} seed {seed}: {reason}")]
    GenerationFailure { size: usize, seed: u64, reason: String },

    #[error("format error at line {line}, field `{field}`: {message}")]
    Format {
        line: usize,
        field: String,
        message: String,
    },

    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("cluster repair impossible: {0}")]
    RepairImpossible(String),

    #[error("invalid route count k={k}: {reason}")]
    InvalidK { k: usize, reason: String },

    #[error("instance too large for the exact solver: {0}")]
    TooLarge(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("solver failed on instance `{instance}`: {source}")]
    Instance {
        instance: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn format(line: usize, field: &str, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
