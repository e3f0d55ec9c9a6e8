use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("unsupported parity: sequence length {0} is odd")]
    UnsupportedParity(usize),

    #[error("half-angle polynomial has odd exponent {0} and is not an integer-frequency series")]
    HalfAngleExponent(i64),

    #[error("1 - A^2 - C^2 is negative (grid minimum {margin:e})")]
    NotSubunitary { margin: f64 },

    #[error("ill-conditioned completion (unitarity residual {residual:e})")]
    IllConditionedCompletion { residual: f64 },

    #[error("stripping stalled at degree {degree} (rank residual {residual:e})")]
    StrippingStalled { degree: usize, residual: f64 },

    #[error("target not eps-close: measured gap {gap:e} exceeds eps {eps:e}")]
    TargetNotClose { gap: f64, eps: f64 },

    #[error("index out of range: ({row}, {col}) with dimension {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("not Hermitian: entry ({row}, {col}) does not match its mirror")]
    NotHermitian { row: usize, col: usize },

    #[error("sparsity exceeded: row {row} has {count} nonzeros but d = {d}")]
    SparsityExceeded { row: usize, count: usize, d: usize },

    #[error("invalid sparsity d = {d} for dimension {dim}")]
    InvalidSparsity { d: usize, dim: usize },

    #[error("zero Hamiltonian")]
    ZeroHamiltonian,

    #[error("unmatched eigenphase {predicted} (nearest walk phase is {deviation:e} away)")]
    UnmatchedEigenphase { predicted: f64, deviation: f64 },

    #[error("N cap exceeded: required N = {required}, cap = {cap}")]
    SequenceTooLong { required: usize, cap: usize },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
