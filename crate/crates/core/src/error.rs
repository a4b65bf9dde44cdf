use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A merge specification that cannot be satisfied for the given curve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecViolation {
    #[error("k + l exceeds m ({k} + {l} > {m})")]
    OrdersExceedDegree { k: usize, l: usize, m: usize },
    #[error("k exceeds n1 + 1 ({k} > {n} + 1)")]
    LeftOrderTooHigh { k: usize, n: usize },
    #[error("l exceeds n_s + 1 ({l} > {n} + 1)")]
    RightOrderTooHigh { l: usize, n: usize },
    #[error("m is below the largest segment degree ({m} < {n})")]
    DegreeBelowInput { m: usize, n: usize },
    #[error("box has dimension {found}, curve has dimension {expected}")]
    BoxDimension { expected: usize, found: usize },
    #[error("box lower bound exceeds upper bound in coordinate {coordinate} ({lower} > {upper})")]
    InvertedBox {
        coordinate: usize,
        lower: f64,
        upper: f64,
    },
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("forward difference of order {order} needs more than {len} values")]
    DifferenceOrder { order: usize, len: usize },
    #[error("index {index} out of range for extent {extent}")]
    IndexOutOfRange { index: usize, extent: usize },
    #[error("index set is not strictly ascending")]
    NonAscendingIndices,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("curve has zero total length")]
    ZeroLength,
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("quadratic objective is not symmetric")]
    NotSymmetric,
    #[error("solver did not converge within {iterations} iterations")]
    IterationLimit { iterations: usize, best: Vec<f64> },
    #[error("invalid merge specification: {0}")]
    Spec(#[from] SpecViolation),
}
