use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller supplied an argument outside the operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configured resource bound would be exceeded.
    #[error("budget exceeded: {what} needs {requested}, limit is {limit} (raise {knob})")]
    Budget {
        what: String,
        requested: u128,
        limit: u128,
        knob: &'static str,
    },

    /// A mathematical identity or divisibility that must hold did not.
    #[error("verification failed: {0}")]
    Verification(String),

    /// An internal consistency condition broke; this indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
