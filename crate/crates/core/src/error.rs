use thiserror::Error;

/// Errors raised while validating frames and scalings or running analyses.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("frame has {k} vectors but needs at least n = {n}")]
    TooFewVectors { n: usize, k: usize },
    #[error("vector {index} has norm {norm}, not within 1e-6 of 1")]
    NotUnitNorm { index: usize, norm: f64 },
    #[error("gram matrix diagonal entry {index} is {value}, expected 1")]
    BadDiagonal { index: usize, value: String },
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix is not positive semidefinite")]
    NotPsd,
    #[error("gram matrix has rank {rank}, exceeding the ambient dimension {n}")]
    RankExceedsDimension { rank: usize, n: usize },
    #[error("frame does not span the ambient space (rank {rank} < {n})")]
    NotSpanning { rank: usize, n: usize },
    #[error("index set must be nonempty")]
    EmptySubset,
    #[error("index {index} out of range for {k} frame vectors")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("weight vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("weight {index} is negative")]
    NegativeWeight { index: usize },
    #[error("weights do not form a scaling of the frame")]
    NotAScaling,
    #[error("index sets are not disjoint")]
    NotDisjoint,
    #[error("{what} of size {size} exceeds the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("no disjoint cover of the support by empty-cover members")]
    CoverNotFound,
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),
    #[error("value {0} has no exact representation in this scalar mode")]
    NotRepresentable(String),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
