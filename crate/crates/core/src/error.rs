use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("element code {code} is not in {ring}")]
    InvalidElement { code: u64, ring: String },

    #[error("operand does not belong to {ring}")]
    RingMismatch { ring: String },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} needs {size} entries, cap is {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },

    #[error("word is not a local codeword of check {row}")]
    NotLocalCodeword { row: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("zero likelihood p(y={output}|c={input}); infinite costs are not supported")]
    ZeroLikelihood { output: usize, input: usize },

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("common denominator {mu} exceeds cap {cap}")]
    DenominatorCap { mu: String, cap: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
