use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("leading term of the zero polynomial is undefined")]
    UndefinedLeadingTerm,
    #[error("validation error: {0}")]
    Validation(String),
    #[error("budget exceeded in {stage}: {detail}")]
    Budget { stage: String, detail: String },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn budget(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Budget {
            stage: stage.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
