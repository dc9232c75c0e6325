use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MotifError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("{}:{line}: cannot parse {token:?} as a finite number", .path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        token: String,
    },

    #[error("{}:{line}: column {column} is out of range for a row of {width} fields", .path.display())]
    ColumnOutOfRange {
        path: PathBuf,
        line: usize,
        column: usize,
        width: usize,
    },

    #[error("{}: no values parsed", .0.display())]
    EmptySeries(PathBuf),

    #[error("i/o error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed report {}: {source}", .path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("could not place {occurrences} non-overlapping patterns of length {pattern_length} in {length} points")]
    InfeasiblePacking {
        length: usize,
        pattern_length: usize,
        occurrences: usize,
    },

    #[error("report {index} has no {method:?} method block")]
    MissingMethod { index: usize, method: String },

    #[error(transparent)]
    Core(#[from] motiflearn_core::Error),
}

impl MotifError {
    /// Process exit code: 1 for configuration problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            MotifError::Config(_)
            | MotifError::InfeasiblePacking { .. }
            | MotifError::Core(motiflearn_core::Error::InvalidParameter(_)) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, MotifError>;
