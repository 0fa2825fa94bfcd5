use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("odd-length word where an even one is required")]
    OddLength,
    #[error("word of length {0} is too short for the canonical form (need at least 3)")]
    TooShort(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("word length cap of {cap} letters exceeded during {stage}")]
    CapExceeded { cap: usize, stage: &'static str },
    #[error("search visited more than {0} states")]
    SearchCap(usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
