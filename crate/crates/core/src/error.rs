//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not PSD: eigenvalue {eigenvalue:.3e} below -{clamp:.3e}")]
    NotPsd { eigenvalue: f64, clamp: f64 },

    #[error("matrix asymmetry {asymmetry:.3e} exceeds the symmetrization limit")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("tolerance {name} = {value} must lie in (0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("no factorization: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NoFactorization { residual: f64, tolerance: f64 },

    #[error("operator list is empty")]
    EmptyList,

    #[error("epsilon schedule must be strictly decreasing and positive")]
    BadSchedule,

    #[error("limit iteration did not converge: last increment {increment:.3e}")]
    NotConverged { increment: f64 },

    #[error("hypothesis violated: {reason}")]
    HypothesisViolated { reason: String },

    #[error("operator is not a contraction: norm {norm}")]
    NotContraction { norm: f64 },

    #[error("subspaces are not nested")]
    NotNested,

    #[error("decomposition parts are not pairwise orthogonal")]
    NotOrthogonal,

    #[error("decomposition parts do not span the space")]
    NotSpanning,

    #[error("vector lies outside the form domain (residual {residual:.3e})")]
    OutOfFormDomain { residual: f64 },

    #[error("invalid z = {re}+{im}i: {reason}")]
    InvalidZ { re: f64, im: f64, reason: &'static str },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("source matrix is column-rank deficient: rank {rank} of {cols}")]
    RankDeficientSource { rank: usize, cols: usize },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid graded model: {0}")]
    BadModel(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("eigendecomposition failed to converge")]
    EigenFailure,
}
