use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed graph6 record: {0}")]
    MalformedGraph6(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("size limit exceeded: n = {n}, limit is {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },

    #[error("graphs have different orders ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("not supported: {0}")]
    NotSupported(String),

    #[error("matrix parse error: {0}")]
    MatrixParse(String),

    #[error("column {column} is not divisible by {p}")]
    NonIntegralColumn { column: usize, p: u64 },

    #[error("walk matrix is singular")]
    SingularWalkMatrix,

    #[error("graphs are not generalized cospectral")]
    NotCospectral,

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("factorization incomplete: cofactor {0} not factored within budget")]
    FactorizationIncomplete(String),

    #[error("rank hypothesis failed: rank_{p} W = {rank}, need {expected}")]
    RankHypothesisFailed { p: u64, rank: usize, expected: usize },

    #[error("certificate contradicts ground truth for graph {0}")]
    CertificateContradiction(String),
}
