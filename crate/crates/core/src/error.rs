use thiserror::Error;

use crate::rootsys::CartanType;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported Cartan type {kind}{rank}")]
    UnsupportedType { kind: CartanType, rank: usize },

    #[error("rank {rank} exceeds the configured cap of {cap}")]
    RankCapExceeded { rank: usize, cap: usize },

    #[error("Weyl group order exceeds the configured cap of {cap}")]
    SizeCapExceeded { cap: usize },

    #[error("diagram has no uncolored vertices")]
    NoUncoloredVertices,

    #[error("vertex {} is not colored", .vertex + 1)]
    VertexNotColored { vertex: usize },

    #[error("cannot act by the reflection of vertex {}, which is labeled 0", .vertex + 1)]
    ZeroVertexAction { vertex: usize },

    #[error("boundary maps do not compose to zero at degree {degree}")]
    ComplexInconsistent { degree: usize },

    #[error("chart coordinate {index} = {value} lies outside [-1, 1]")]
    OutOfChart { index: usize, value: f64 },

    #[error("step size fell below {floor:e} at t = {t} without a blow-up signature")]
    ToleranceUnreachable { t: f64, floor: f64 },

    #[error("operation requires a root system of type A")]
    NotTypeA,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
