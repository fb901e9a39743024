use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("field '{field}' has zero variance")]
    ZeroVariance { field: String },

    #[error("field '{field}' has fewer than two non-missing values")]
    InsufficientData { field: String },

    #[error("design matrix is rank deficient; dependent columns: {columns:?}")]
    RankDeficient { columns: Vec<String> },

    #[error("fit did not converge after {iterations} iterations (last deviance change {last_change:e})")]
    NotConverged { iterations: usize, last_change: f64 },

    #[error("perfect separation suspected for {columns:?} (|coef| > 15 with exploding standard error)")]
    Separation { columns: Vec<String> },

    #[error("http request failed: {0}")]
    Http(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
