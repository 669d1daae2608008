use thiserror::Error;

/// Errors produced by the matrix routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has no entries")]
    Empty,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}x{expected}, found {found}x{found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: ||M - M*|| = {deviation:.3e} exceeds {allowed:.3e}")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error(
        "matrix is not positive semi-definite: smallest eigenvalue {min_eigenvalue:.3e} is below {allowed:.3e}"
    )]
    NotPsd { min_eigenvalue: f64, allowed: f64 },

    #[error("matrix is not an orthogonal projection: ||P^2 - P|| = {residual:.3e}")]
    NotProjection { residual: f64 },

    #[error("matrices do not commute: ||XY - YX|| = {residual:.3e} exceeds {allowed:.3e}")]
    NonCommuting { residual: f64, allowed: f64 },

    #[error("Hermitian eigensolver did not converge on a {dim}x{dim} matrix after {sweeps} sweeps")]
    NoConvergence { dim: usize, sweeps: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
}

impl Error {
    /// True for failures of the arithmetic itself rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::NumericalBreakdown(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
