use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input parameter is outside its legal range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A UDAS set could not be assembled from the given generators.
    #[error("construction error: {0}")]
    Construction(String),

    /// The instance is too large for exhaustive enumeration.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Mismatched matrix, frame or sequence dimensions.
    #[error("size mismatch: {0}")]
    Size(String),

    /// Malformed text input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The parity-check matrix cannot be used as given.
    #[error("code construction error: {0}")]
    Code(String),

    /// A requested rate cannot be reached by the channel.
    #[error("unreachable target: {0}")]
    Unreachable(String),

    /// A numerical routine did not reach its tolerance.
    #[error("numerical tolerance not met: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
