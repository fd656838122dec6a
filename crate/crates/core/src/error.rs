use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("inadmissible block sequence: {0}")]
    Admissibility(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("constraint not satisfiable: {0}")]
    Constraint(String),

    #[error("subspace is not closed under the bracket: {0}")]
    NotClosed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
