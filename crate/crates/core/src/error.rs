use thiserror::Error;

/// Errors produced by the library. Every fallible operation returns this type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} exceeds the limit of {max} for {what}")]
    DimensionTooLarge { what: &'static str, n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("term count overflow: parameters require L = {required} terms but the cap is {cap}")]
    TermOverflow { required: f64, cap: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Short machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::TermOverflow { .. } => "term_overflow",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::Precondition(_) => "precondition",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
