use thiserror::Error;

#[derive(Debug, Error)]
pub enum TtpError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("instance too large for exhaustive search: {0}")]
    SizeGuard(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl TtpError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        TtpError::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, TtpError>;
