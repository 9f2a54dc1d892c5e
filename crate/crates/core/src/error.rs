use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),

    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("operation is undefined on the empty word")]
    EmptyWord,

    #[error("operation requires a binary alphabet")]
    NonBinary,

    #[error("words have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),

    #[error("{what} exceeded the limit of {limit}")]
    Resource { what: String, limit: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A runtime re-verification of a proven postcondition failed.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, limit: u64) -> Self {
        Error::Resource { what: what.into(), limit }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
