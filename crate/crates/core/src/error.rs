use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant except [`Error::Internal`] describes a problem with the
/// inputs; `Internal` is reserved for failures that are not the caller's fault
/// (an output sink refusing a write, a serializer failing).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} atoms, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A named field of an input failed validation. `path` uses the field
    /// names of the portfolio file format (`space.probs`, `premia.agent1`).
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },

    #[error("invalid distortion: {0}")]
    Distortion(String),

    #[error("negative claim for agent {agent} at atom {atom}: {value}")]
    NegativeClaim {
        agent: usize,
        atom: usize,
        value: f64,
    },

    #[error("scenario set is empty")]
    EmptyScenarioSet,

    #[error("enumeration guard exceeded: {found} > {max}")]
    GuardExceeded { found: usize, max: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// Re-anchors an error at a file field path, keeping the message.
    pub fn at(self, path: impl Into<String>) -> Self {
        match self {
            Error::Invalid {
                path: inner,
                reason,
            } => Error::Invalid {
                path: format!("{}.{}", path.into(), inner),
                reason,
            },
            Error::Internal(msg) => Error::Internal(msg),
            other => Error::Invalid {
                path: path.into(),
                reason: other.to_string(),
            },
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
