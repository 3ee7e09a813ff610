use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("point {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("degenerate interval [{0}, {1}]")]
    DegenerateInterval(String, String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("arity mismatch: word has {expected} variables, got {got} arguments")]
    Arity { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not solvable by this method: {0}")]
    Unsolvable(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("radius {radius} refused: about {estimate} words to enumerate, limit is {limit}")]
    RadiusCap { radius: usize, estimate: u128, limit: u128 },
}

pub type Result<T> = core::result::Result<T, Error>;
