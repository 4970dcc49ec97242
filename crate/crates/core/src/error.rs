use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A malformed input line. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("vector length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("record {index} ({date}) has a missing component; resolve missing values first")]
    MissingValue { index: usize, date: String },

    #[error("column {column} has no present values; cannot impute its mean")]
    AllMissingColumn { column: String },

    #[error("invalid range for {attribute}: low {low} > high {high}")]
    InvalidRange { attribute: String, low: f64, high: f64 },

    #[error("K must be at least 1")]
    ZeroClusters,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("model has no centroids")]
    EmptyModel,

    #[error("K = {k} exceeds the {distinct} distinct records available")]
    NotEnoughDistinct { k: usize, distinct: usize },

    #[error("explicit initialization: {0}")]
    ExplicitInit(String),

    #[error("labeling: {0}")]
    Labeling(String),

    #[error("cluster {0} has no weather category; label the model first")]
    Unlabeled(usize),

    #[error("unknown weather category {0:?}")]
    UnknownCategory(String),

    #[error("no ground truth for forecast date {0}")]
    MissingTruth(String),

    #[error("invalid accuracy inputs: matched {matched}, total {total}")]
    InvalidAccuracy { matched: usize, total: usize },

    #[error("unsupported model format_version {0}")]
    UnsupportedVersion(u64),

    #[error("model file: {0}")]
    ModelFile(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
