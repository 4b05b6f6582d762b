use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} out of range: {value} (allowed {min}..={max})")]
    Bounds {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("shape mismatch in {context}: expected {expected}, got {got}")]
    Shape {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("HRIR ingestion failed for entry `{entry}`: {reason}")]
    Ingestion { entry: String, reason: String },

    #[error("metric error: {0}")]
    Metric(String),

    #[error("normalisation error: {0}")]
    Normalization(String),

    #[error("vector analysis undefined: {0}")]
    UndefinedVector(String),

    #[error("layout data corrupted: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Wav(#[from] hound::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
