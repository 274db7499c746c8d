use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid series selection: {0}")]
    InvalidSeries(String),
    #[error("identity check failed: {identity} (witness {witness})")]
    Consistency { identity: String, witness: String },
    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),
    #[error("degree {degree} exceeds the slice bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("S^2 of an antipoded letter requires the functional matrices")]
    MissingFunctionals,
    #[error("kernel has dimension {0}, expected 1")]
    KernelDeficit(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("report schema mismatch: {0} vs {1}")]
    SchemaMismatch(String, String),
}

pub type Result<T> = std::result::Result<T, Error>;
