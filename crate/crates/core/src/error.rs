use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("entry ({target}, {input}) breaks homogeneity of a degree {degree} map")]
    Inhomogeneous { target: String, input: String, degree: i32 },
    #[error("malformed permutation {0:?}")]
    MalformedPermutation(Vec<usize>),
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("differential does not square to zero")]
    NotAComplex,
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),
    #[error("perturbation does not lower the filtration: {0}")]
    Filtration(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("truncation: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
