use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspace is not contained in the enclosing space")]
    NotContained,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("relation is not (the graph of) an operator: {0}")]
    NotAnOperator(String),

    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("{0} is not a supported prime (need a prime 2 <= p < 65536)")]
    NotAPrime(u64),

    #[error("bad scalar literal {0:?}")]
    BadScalar(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal postcondition violated: {0}")]
    Postcondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
