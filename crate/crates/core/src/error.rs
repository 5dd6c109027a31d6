use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NonHermitianInput { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("least-squares basis is ill-conditioned (Gram condition estimate {condition:.3e})")]
    IllConditionedBasis { condition: f64 },

    #[error("combiner Gram W*W is singular (condition estimate {condition:.3e})")]
    SingularCombiner { condition: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("per-axis stream count {0} is odd; attainable counts are even")]
    OddStreamCount(usize),

    #[error("stream count {streams} exceeds the smaller array dimension {limit}")]
    StreamExceedsArray { streams: usize, limit: usize },

    #[error("array plane contains the link axis (|cos(theta) cos(phi)| = {0:.3e})")]
    DegeneratePlane(f64),

    #[error("Kronecker factorization requires unrotated (parallel) arrays")]
    NotParallel,

    #[error("epsilon {0} outside (0, 0.5)")]
    BadEpsilon(f64),

    #[error("every eigenvalue is zero; water-filling has nothing to allocate")]
    AllZeroEigenvalues,

    #[error("dictionary has {available} columns but {requested} RF chains were requested")]
    DictionaryExhausted { requested: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
