use thiserror::Error;

/// Errors raised by graph construction, synthesis, matching and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid extension: target order {target} is below current order {order}")]
    InvalidExtension { order: usize, target: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid labelling: {0}")]
    InvalidLabelling(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("arc order missing on {0}")]
    MissingOrder(&'static str),

    #[error("instance too large for exhaustive enumeration: {n} + {m} > {limit}")]
    TooLarge { n: usize, m: usize, limit: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
