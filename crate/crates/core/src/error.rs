use thiserror::Error;

use crate::preserver::Flag;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrices are not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("zero matrix has no norm-attaining vectors")]
    ZeroMatrix,

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid tensor shape: {0}")]
    InvalidShape(String),

    /// A numerical check contradicted the result it was checking.
    #[error("property violated: {0}")]
    PropertyViolation(String),

    #[error("more than one flag assignment reproduces the map: {flag_sets:?}")]
    AmbiguousRecovery { flag_sets: Vec<Vec<Flag>> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimensionMismatch {
        op,
        detail: detail.into(),
    }
}
