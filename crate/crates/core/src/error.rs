use thiserror::Error;

/// Errors surfaced by construction and solving routines.
///
/// Verification suites do not error on residual failures; those are carried
/// in [`crate::report::RelationReport`]. Errors here mean the requested
/// object cannot be built at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank {rank} for series {series}")]
    InvalidRank { series: char, rank: usize },

    #[error("invalid height function: {0}")]
    InvalidHeightFunction(String),

    #[error("operation requires series {expected}, got {got}")]
    WrongSeries { expected: char, got: char },

    #[error("eigensolver did not converge: {0}")]
    EigenNonConvergence(String),

    #[error("no polynomial solution: {0}")]
    NoPolynomialSolution(String),

    #[error("singular linear system: {0}")]
    SingularLinearSystem(String),

    #[error("genericity failure: {0}")]
    GenericityFailure(String),

    #[error("degenerate twist: {0}")]
    DegenerateTwist(String),

    #[error("normalization impossible: {0}")]
    NormalizationImpossible(String),

    #[error("orbit reconstruction failure: {0}")]
    OrbitReconstruction(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("representation error: {0}")]
    Representation(String),

    #[error("inconsistent normalization constants: {0}")]
    InconsistentConstants(String),

    #[error("root finder did not converge: {0}")]
    RootFinderNonConvergence(String),

    #[error("Yang-Baxter self-check failed: residual {0}")]
    YangBaxterFailure(f64),

    #[error("Bruhat factorization failed: {0}")]
    BruhatFailure(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
