use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the landscape pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported file version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("NRMSE undefined: interquartile range of the true landscape is zero")]
    ConstantTruth,

    #[error("degenerate fit: source values have zero variance")]
    DegenerateFit,

    #[error("objective returned non-finite value {value} at {point:?} (iteration {iteration})")]
    NonFiniteObjective {
        value: f64,
        point: Vec<f64>,
        iteration: usize,
    },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
