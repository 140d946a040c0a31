use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("the presented group is infinite (free rank {free_rank})")]
    InfiniteGroup { free_rank: usize },

    #[error("invariant-factor mismatch: {0}")]
    FactorMismatch(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("not a manifold-like complex: {0}")]
    NotManifold(String),

    #[error("complex is non-orientable (sign conflict along facet cycle {cycle:?})")]
    NonOrientable { cycle: Vec<usize> },

    #[error("invalid bordism: {0}")]
    InvalidBordism(String),

    #[error("bordisms are not composable: {0}")]
    NotComposable(String),

    #[error("unknown library manifold `{0}`")]
    UnknownManifold(String),

    #[error("orientation required: {0}")]
    OrientationRequired(String),

    #[error("instance too large for the brute-force oracle: {0}")]
    OracleTooLarge(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
