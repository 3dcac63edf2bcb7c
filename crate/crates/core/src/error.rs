use thiserror::Error;

/// Every failure the engine can signal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient t^{index} requested beyond truncation order {order}")]
    Truncation { index: usize, order: usize },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("index {0} is not supported; only index 1 families are handled")]
    UnsupportedIndex(u32),

    #[error("singular locus is not isolated: {0}")]
    NotTerminal(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("projection shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("catalogue: {0}")]
    Catalog(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("projection cycle through {0}")]
    Cycle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
