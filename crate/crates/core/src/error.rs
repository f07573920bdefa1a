use thiserror::Error;

/// Errors raised by the numeric and symbolic routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: parameters lie on the divisor {divisor}")]
    Pole { divisor: String },

    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("accuracy not reached: estimated error {estimate:e} exceeds tolerance {tolerance:e}")]
    Accuracy { estimate: f64, tolerance: f64 },

    #[error("q-expansion truncated too early: tail bound {bound:e} exceeds tolerance {tolerance:e}")]
    Truncation { bound: f64, tolerance: f64 },

    #[error("series error: {0}")]
    Series(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn pole(divisor: impl Into<String>) -> Self {
        Error::Pole {
            divisor: divisor.into(),
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Error::Pole { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
