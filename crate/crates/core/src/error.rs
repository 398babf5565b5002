use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet error: {0}")]
    Alphabet(String),

    #[error("invalid free factor system: {0}")]
    System(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("verification incomplete: {0}")]
    VerificationIncomplete(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("audit failure: {0}")]
    Audit(String),

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Errors that signal a violated mathematical property rather than bad input.
    pub fn is_property_failure(&self) -> bool {
        matches!(self, Error::Audit(_) | Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
