use crate::corpus::Language;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("option count {0} out of range [2, 10]")]
    OptionCount(usize),

    #[error("chat template has no {{user}} placeholder")]
    MissingPlaceholder,

    #[error("invalid sample {id}: {reason}")]
    InvalidSample { id: String, reason: String },

    #[error("invalid benchmark item {id}: {reason}")]
    InvalidItem { id: String, reason: String },

    #[error("source {dataset}: not enough {language} rows, short by {deficit}")]
    Shortage {
        dataset: String,
        language: Language,
        deficit: u64,
    },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("config: {0}")]
    Config(String),

    #[error("empty input")]
    EmptyInput,

    #[error("no continuations in request")]
    EmptyContinuations,

    #[error("{0} continuations exceeds the protocol limit of 10")]
    TooManyContinuations(usize),

    #[error("continuation {0} is blank")]
    BlankContinuation(usize),

    #[error("transport: {0}")]
    Transport(String),

    #[error("protocol: {0}")]
    Protocol(String),

    #[error("fixture: {0}")]
    Fixture(String),

    #[error("no items to evaluate")]
    NoItems,

    #[error("missing benchmark {0}")]
    MissingBenchmark(String),

    #[error("result keys differ: {0}")]
    KeyMismatch(String),

    #[error("prediction {id} has no gold_index")]
    MissingGoldIndex { id: String },

    #[error("prediction {id}: predicted_index {predicted} out of range for {n_options} options")]
    PredictionOutOfRange {
        id: String,
        predicted: usize,
        n_options: usize,
    },

    #[error("empty choice distribution")]
    EmptyDistribution,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Transport failures may succeed on a later attempt; everything else is final.
    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::Transport(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
