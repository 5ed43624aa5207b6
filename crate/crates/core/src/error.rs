use thiserror::Error;

/// Errors raised by relation arithmetic and the stability engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ambient dimension must be at least 1")]
    EmptyAmbient,

    #[error("vector is not in the domain (residual {residual:.3e})")]
    NotInDomain { residual: f64 },

    #[error("vector is not in the range (residual {residual:.3e})")]
    NotInRange { residual: f64 },

    #[error("relation is not square ({dim_h} -> {dim_k})")]
    NonSquare { dim_h: usize, dim_k: usize },

    #[error("relation is not nonnegative self-adjoint")]
    NotNonnegativeSelfAdjoint,

    #[error("relation is not self-adjoint")]
    NotSelfAdjoint,

    #[error("relation has zero range")]
    ZeroRange,

    #[error("numeric inconsistency: {0}")]
    Inconsistency(String),

    #[error("malformed family: {0}")]
    Family(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
