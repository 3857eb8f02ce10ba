use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("set is not confining: {0}")]
    NotConfining(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("size cap exceeded: {what} = {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
