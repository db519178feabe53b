use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension error: {what} (required N_max = {required}, available {available})")]
    Dimension {
        what: &'static str,
        required: usize,
        available: usize,
    },

    #[error("integration error: {0}")]
    Integration(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("numerical contract violated: {what} residual {residual:e} exceeds {tolerance:e}")]
    Contract {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
