use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("deck size must be at least 1, got {0}")]
    InvalidDeckSize(usize),

    #[error("bias must lie in (0, 1], got {0}")]
    InvalidBias(String),

    #[error("cannot parse probability {0:?}: expected \"a/b\" or a decimal")]
    ParseBias(String),

    #[error("placement sequence has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid game state: {0}")]
    State(String),

    #[error("revealed prefix {0:?} is not produced by any shelf shuffle")]
    InconsistentPrefix(Vec<usize>),

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    Resource { n: usize, cap: usize },
}
