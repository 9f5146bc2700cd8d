use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Dynkin data: {0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("not a positive root: {0}")]
    NotPositive(String),
    #[error("dependent roots: {0}")]
    Dependent(String),
    #[error("coefficient overflow during enumeration")]
    Overflow,
    #[error("{0} is not defined for {1}")]
    Undefined(String, String),
    #[error("representation requires a minuscule node: {0}")]
    NotMinuscule(String),
    #[error("ordering violation at ({0}, {1})")]
    Ordering(usize, usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("solution space has dimension {0}, expected 1")]
    Nullity(usize),
    #[error("unsatisfiable sign system: {0}")]
    Unsatisfiable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
