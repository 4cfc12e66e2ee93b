use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input (dimensions, parameters, non-finite values).
    #[error("invalid input: {0}")]
    Input(String),
    /// An operation's documented precondition does not hold for otherwise valid input.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The instance is too large for the requested exact method.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A quantity that must be nonnegative came out clearly negative.
    #[error("numerical integrity: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
