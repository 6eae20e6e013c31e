use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Variants map onto the process exit codes used by the command-line tool:
/// `Syntax`, `Json`, `Shape`, `ObjectMismatch`, `Label`, `InvalidProp` and
/// `MissingAtom` are usage-class errors (exit 2), `Bound` is a resource-cap
/// error (exit 3).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("no value for atom `{0}`")]
    MissingAtom(String),

    #[error("{what}: bound exceeded, {actual} > {limit}")]
    Bound {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("not a valid proposition: {0}")]
    InvalidProp(String),

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("label mismatch: {0}")]
    Label(String),

    #[error("required condition does not hold: {0}")]
    Condition(String),

    #[error("composition does not preserve the linking condition: {0}")]
    Preservation(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable code, one per failure class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::MissingAtom(_) => "missing-atom",
            Error::Bound { .. } => "bound",
            Error::InvalidProp(_) => "invalid-prop",
            Error::ObjectMismatch(_) => "object-mismatch",
            Error::Shape(_) => "shape",
            Error::Label(_) => "label",
            Error::Condition(_) => "condition",
            Error::Preservation(_) => "preservation",
            Error::Internal(_) => "internal",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
