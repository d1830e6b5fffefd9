use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid smoothing parameters: {0}")]
    InvalidSmoothing(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("class {0} has no patterns")]
    EmptyClass(usize),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("unknown label column `{0}`")]
    UnknownLabelColumn(String),

    #[error("class {class} has {count} sample(s); stratified split needs at least 2")]
    ClassTooSmall { class: usize, count: usize },

    #[error("length mismatch: {0} predictions vs {1} labels")]
    LengthMismatch(usize, usize),

    #[error("no runs to aggregate")]
    NoRuns,

    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
    #[error("dataset `{name}` not found at {}; run `pnn-chm fetch` first", path.display())]
    MissingData { name: String, path: PathBuf },

    #[error("download failed for {url}: {message}")]
    Download { url: String, message: String },

    #[error("checksum mismatch for {0}")]
    Checksum(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}
