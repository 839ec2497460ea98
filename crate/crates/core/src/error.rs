use std::fmt;

use thiserror::Error;

/// Malformed profile expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source text where parsing stopped.
    pub offset: usize,
    /// Tokens that would have been accepted at `offset`.
    pub expected: Vec<String>,
    pub found: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: expected ", self.offset)?;
        write!(f, "{}", self.expected.join(" or "))?;
        match &self.found {
            Some(tok) => write!(f, ", found `{tok}`"),
            None => write!(f, ", found end of input"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("integrand returned a non-finite value at x = {at}")]
    NonFinite { at: f64 },

    #[error("tolerance not met: best value {best}, error estimate {estimate}")]
    ToleranceNotMet { best: f64, estimate: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown sweep parameter `{0}`")]
    UnknownParam(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code for this error: 2 for input and domain problems,
    /// 3 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFinite { .. } | Error::ToleranceNotMet { .. } | Error::NoBracket { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
