use core::fmt;

/// Errors raised by the numerical core.
///
/// Each variant names the violated precondition so callers can surface it
/// unchanged.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was NaN or infinite.
    NonFinite(&'static str),
    /// An argument was outside its admissible range.
    OutOfDomain { what: &'static str, value: f64, requirement: &'static str },
    /// The configuration is valid in general but not for this operation.
    Unsupported(&'static str),
    /// Too few usable samples for a fit.
    InsufficientData { needed: usize, got: usize },
    /// A numerical procedure failed to converge.
    NoConvergence(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::OutOfDomain { what, value, requirement }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite(what) => write!(f, "{what} must be finite"),
            Error::OutOfDomain { what, value, requirement } => {
                write!(f, "{what} = {value} violates {requirement}")
            }
            Error::Unsupported(msg) => f.write_str(msg),
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} usable samples, got {got}")
            }
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
        }
    }
}

impl core::error::Error for Error {}
