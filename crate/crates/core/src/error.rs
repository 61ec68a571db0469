use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("inhomogeneous relation `{0}`; mixed-degree relations need the general mode")]
    Inhomogeneous(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    pub fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { line, col, msg: msg.into() }
    }

    /// Same error with the line number replaced, for errors raised while
    /// parsing a single line of a larger file.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            Error::Syntax { col, msg, .. } => Error::Syntax { line, col, msg },
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
