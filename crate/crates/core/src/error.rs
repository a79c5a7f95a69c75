use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NotSquarefree: {0} has a square factor > 1")]
    NotSquarefree(u64),
    #[error("OutOfRange: D = {0} must be at least 2")]
    OutOfRange(i64),
    #[error("CtxMismatch: operands belong to Q(sqrt {0}) and Q(sqrt {1})")]
    CtxMismatch(u64, u64),
    #[error("NotTotallyPositive: {0}")]
    NotTotallyPositive(String),
    #[error("BadIndex: {0}")]
    BadIndex(String),
    #[error("TooLarge: {0}")]
    TooLarge(String),
    #[error("InternalError: {0}")]
    Internal(String),
}

impl Error {
    /// Name of the variant, used by the CLI when surfacing domain errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::OutOfRange(_) => "OutOfRange",
            Error::CtxMismatch(..) => "CtxMismatch",
            Error::NotTotallyPositive(_) => "NotTotallyPositive",
            Error::BadIndex(_) => "BadIndex",
            Error::TooLarge(_) => "TooLarge",
            Error::Internal(_) => "InternalError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
