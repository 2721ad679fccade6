use thiserror::Error;

/// Errors raised by structure construction, comonad materialisation and the deciders.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("incompatible signatures")]
    IncompatibleSignatures,

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("relation name `{0}` is already in use")]
    NameClash(String),

    #[error("signature is not modal (all arities must be 1 or 2)")]
    NotModal,

    #[error("{0}")]
    Pointedness(String),

    #[error("tuple {tuple:?} for `{relation}` has length {len}, expected arity {arity}")]
    ArityMismatch {
        relation: String,
        tuple: Vec<u32>,
        len: usize,
        arity: usize,
    },

    #[error("element {element} is out of range for a universe of size {size}")]
    OutOfRange { element: u32, size: usize },

    #[error("{what} has {size} elements, exceeding the guard of {limit}")]
    GuardExceeded { what: String, size: usize, limit: usize },

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: impl Into<String>, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::GuardExceeded {
            what: what.into(),
            size,
            limit,
        })
    } else {
        Ok(())
    }
}
