use thiserror::Error;

use crate::probe::ProbeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Probe(#[from] ProbeError),

    /// An argument lies outside the domain of the operation.
    #[error("range error: {0}")]
    Range(String),

    /// The operation's precondition does not hold for the current state.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Vector lengths or trace shape do not match the structure.
    #[error("shape error: {0}")]
    Shape(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// An internal invariant failed; indicates a bug rather than bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// A replay produced a different execution than the original run.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the caller's input, as opposed to broken internals.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Range(_)
                | Error::Precondition(_)
                | Error::Shape(_)
                | Error::Config(_)
                | Error::Parse { .. }
                | Error::Probe(ProbeError::AddressOutOfRange { .. })
                | Error::Probe(ProbeError::WordTooWide { .. })
        )
    }
}
