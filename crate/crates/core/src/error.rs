use thiserror::Error;

/// Errors reported by every analysis in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violates a structural invariant. `field` names the offending
    /// part of the presentation (e.g. `rows[2]`, `cross`, `boundary[0]`).
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    /// The operation is not decidable on this presentation.
    #[error("unsupported presentation: {0}")]
    Unsupported(String),

    /// A point or monomial lies outside the domain of the requested map.
    #[error("outside the domain: {0}")]
    Domain(String),

    /// A numeric parameter is out of range.
    #[error("bad parameter: {0}")]
    Parameter(String),

    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),

    #[error("objects belong to different models")]
    ModelMismatch,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix {0} has a negative entry")]
    Negative(String),

    #[error("the zero monomial has no cocycle value")]
    UndefinedCocycle,

    /// Malformed text input, with a 1-based line and column when known.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
