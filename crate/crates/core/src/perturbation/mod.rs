//! Perturbation of a parallel sum: `E = (A+X):(B+Y) - A:B` and the family
//! of norm bounds on it.

mod bounds;
mod objective;
mod optimize;
mod report;

pub use bounds::{
    error_matrix, factorization_residual, h_and_t, lambda_coeff, mu_coeff, one_sided_bounds, one_sided_error,
    one_sided_factorization_residual, parameterized_bound, two_sided_shared_bounds, two_sided_shared_error,
    OneSidedBounds, SharedBounds,
};
pub use objective::{f_eval, Objective};
pub use optimize::{golden_section_min, minimize_f, FMinimum, OptimizerConfig};
pub use report::{bound_report, BoundReport};

use crate::error::Result;
use crate::matrix::PsdMatrix;

/// The quadruple `(A, B, X, Y)`: a parallel sum `A:B` and PSD perturbations
/// `X` of `A` and `Y` of `B`.
#[derive(Debug, Clone)]
pub struct PerturbationProblem {
    a: PsdMatrix,
    b: PsdMatrix,
    x: PsdMatrix,
    y: PsdMatrix,
}

impl PerturbationProblem {
    pub fn new(a: PsdMatrix, b: PsdMatrix, x: PsdMatrix, y: PsdMatrix) -> Result<Self> {
        a.ensure_same_dim(&b)?;
        a.ensure_same_dim(&x)?;
        a.ensure_same_dim(&y)?;
        Ok(Self { a, b, x, y })
    }

    pub fn a(&self) -> &PsdMatrix {
        &self.a
    }

    pub fn b(&self) -> &PsdMatrix {
        &self.b
    }

    pub fn x(&self) -> &PsdMatrix {
        &self.x
    }

    pub fn y(&self) -> &PsdMatrix {
        &self.y
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn rejects_mixed_dimensions() {
        let i2 = PsdMatrix::identity(2);
        let err = PerturbationProblem::new(i2.clone(), i2.clone(), PsdMatrix::identity(3), i2).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }
}
