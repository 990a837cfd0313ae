use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A malformed edge was supplied to a constructor.
    #[error("invalid edge {edge:?}: {reason}")]
    InvalidEdge { edge: Vec<usize>, reason: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request is valid but beyond what the configured strategy can certify.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// A node or time budget ran out before the answer was certified.
    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("pattern error: {0}")]
    Pattern(String),

    /// An internal consistency check failed; indicates a bug, not a finding.
    #[error("solver inconsistency: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(format!("json: {e}"))
    }
}
