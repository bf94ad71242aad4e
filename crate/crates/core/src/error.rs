use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("index {index} out of range for poset of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("malformed poset: {0}")]
    MalformedPoset(String),

    #[error("not a linear extension: {0}")]
    InvalidLinearExtension(String),

    #[error("resource limit exceeded: {what} exceeds cap {cap}")]
    Resource { what: String, cap: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown atom or element: {0}")]
    UnknownAtom(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported analysis: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Hard caps on exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of states enumerated or walked in one orbit.
    pub max_states: usize,
    /// Maximum number of poset elements (e.g. `p * k` for products).
    pub max_elements: usize,
}

impl Limits {
    pub const DEFAULT_CAP: usize = 10_000_000;

    pub fn with_cap(cap: usize) -> Self {
        Limits {
            max_states: cap,
            max_elements: cap,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::with_cap(Self::DEFAULT_CAP)
    }
}
