use std::fmt;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller passed an argument outside the operation's domain.
    Argument(String),
    /// An input violated a structural contract (e.g. an unmeasured ancilla).
    Contract(String),
    /// A size guardrail was exceeded.
    Capacity(String),
    /// The physical error rate is at or above the surface code threshold.
    TooCloseToThreshold { gate_error: f64, threshold: f64 },
    /// A text or JSON input could not be parsed.
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Argument(m) => write!(f, "invalid argument: {m}"),
            Error::Contract(m) => write!(f, "contract violated: {m}"),
            Error::Capacity(m) => write!(f, "capacity exceeded: {m}"),
            Error::TooCloseToThreshold {
                gate_error,
                threshold,
            } => write!(
                f,
                "gate error {gate_error} is too close to threshold ({threshold}) for tractable computation"
            ),
            Error::Parse { line, message } => write!(f, "parse error on line {line}: {message}"),
        }
    }
}

impl std::error::Error for Error {}
