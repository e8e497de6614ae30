use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("I/O error on {path}: {source}")]
    IoPath {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed feature, score or ground-truth file. `location` names the
    /// line or record that failed.
    #[error("{source_name}: {location}: {msg}")]
    Format {
        source_name: String,
        location: String,
        msg: String,
    },

    #[error("invalid feature set: {0}")]
    InvalidFeatureSet(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("need at least {min} samples, got {n}")]
    TooFewSamples { n: usize, min: usize },

    #[error("k = {k} exceeds available ranking depth {available}")]
    DepthExceeded { k: usize, available: usize },

    #[error("invalid rank pair ({l_ab}, {l_ba})")]
    InvalidRankPair { l_ab: u32, l_ba: u32 },

    #[error("no ranking list for gallery sample {0}")]
    MissingRanking(u32),

    #[error("no reliability value for gallery sample {0}")]
    MissingReliability(u32),

    #[error("unsupported index format version {found} (expected {expected})")]
    IndexVersion { found: u32, expected: u32 },

    #[error("corrupt index file: {0}")]
    CorruptIndex(String),

    #[error("gallery fingerprint mismatch: index was built for a different gallery")]
    FingerprintMismatch,

    #[error("query parameters do not match the index: {0}")]
    ParamMismatch(String),
}

impl Error {
    pub(crate) fn format(source_name: impl Into<String>, location: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Format {
            source_name: source_name.into(),
            location: location.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn io_at(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::IoPath {
            path: path.to_path_buf(),
            source,
        }
    }
}
