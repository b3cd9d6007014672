use std::fmt;

use heilbronn_core::Error;

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad command line or manifest (exit 2).
    Usage(String),
    /// Input or parameter rejected (exit 3).
    Validation(String),
    /// The computation itself failed (exit 4).
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Validation(m) => write!(f, "validation failure: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Degenerate(_) | Error::TooFewItems { .. } | Error::EmptyConfiguration(_) => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Validation(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
