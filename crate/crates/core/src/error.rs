use thiserror::Error;

/// Errors raised by the numerical operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0:?} is not listed in the finite table")]
    PointNotInTable(Vec<f64>),

    #[error("point must have at least one coordinate")]
    EmptyPoint,

    #[error("non-finite coordinate in {0:?}")]
    NonFinite(Vec<f64>),

    #[error("empty sample")]
    EmptySample,

    #[error("pair with identical points {0:?}")]
    DegeneratePair(Vec<f64>),

    #[error("invalid finite table: {0}")]
    InvalidTable(String),

    #[error("image {0:?} lies outside the point list")]
    ImageOutsideDomain(Vec<f64>),

    #[error("degenerate vertex list: all vertices coincide")]
    DegenerateVertices,

    #[error("ray escapes M: no containing scale up to {0}")]
    RayEscapes(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
