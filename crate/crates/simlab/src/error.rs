use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("config: {0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] udas_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl SimError {
    pub fn at(line: usize, msg: impl Into<String>) -> Self {
        SimError::Config {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit status: 2 for configuration problems, 3 when a numerical
    /// routine missed its tolerance, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config { .. } | SimError::Invalid(_) => 2,
            SimError::Core(udas_core::Error::Tolerance(_)) => 3,
            SimError::Core(udas_core::Error::Parse { .. }) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
