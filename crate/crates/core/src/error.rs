use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("input vectors are linearly dependent (numerical rank {rank} < {count})")]
    DependentInput { rank: usize, count: usize },

    #[error("matrix is not self-adjoint (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("zero vector cannot represent a ray")]
    ZeroVector,

    #[error("vectors {i} and {j} are not orthonormal (inner product {re:e}{im:+e}i)")]
    NotOrthonormal { i: usize, j: usize, re: f64, im: f64 },

    #[error("not a density operator: {0}")]
    NotDensityOperator(String),

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("value {value} at position {index} lies outside the unit interval")]
    ValueOutOfRange { index: usize, value: f64 },

    #[error("NotInformationallyComplete: design rank {rank} < {required}")]
    NotInformationallyComplete { rank: usize, required: usize },

    #[error("DimensionTooSmall: dimension {dim} < 3")]
    DimensionTooSmall { dim: usize },

    #[error("invalid ray map: {0}")]
    InvalidRayMap(String),

    #[error("HypothesisViolated: rays {i} and {j} break orthogonality preservation")]
    HypothesisViolated { i: usize, j: usize },

    #[error("MissingGadget: no covering context has its phase-fixing rays among the sources")]
    MissingGadget,

    #[error("FitFailed: residual {residual:e} exceeds {limit:e}")]
    FitFailed { residual: f64, limit: f64 },

    #[error("MalformedDocument: {0}")]
    MalformedDocument(String),

    #[error("BasisNotOrthogonal: basis {basis}, vectors {i} and {j} (overlap {overlap:e})")]
    BasisNotOrthogonal { basis: usize, i: usize, j: usize, overlap: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
