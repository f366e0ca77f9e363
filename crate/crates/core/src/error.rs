use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} points but {right} values")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid operator: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("block operator needs linear diagonal blocks when the coupling is nonzero")]
    UnsupportedComposition,
    #[error("block {0} has no matrix inverse; use the splitting path instead")]
    NonInvertibleBlock(&'static str),
    #[error("block {0} is not a linear operator")]
    NonLinearBlock(&'static str),
    #[error("map is not linear: probe residual {residual:e}")]
    NotLinear { residual: f64 },
    #[error("coupling matrix is zero")]
    ZeroCoupling,
    #[error("cannot sample the graph of this operator: {0}")]
    UnsupportedSampling(String),
    #[error("matrix is not symmetric positive definite")]
    NotSymmetricPd,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("recovered operator is not monotone: smallest eigenvalue of symmetric part {min_eigenvalue:e}")]
    NonMonotone { min_eigenvalue: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
