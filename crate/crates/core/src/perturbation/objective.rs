use crate::error::{Error, Result};
use crate::matrix::{operator_norm, CMatrix};
use crate::spectral::{pinv_psd, spectral_norm};
use crate::tolerance::ToleranceConfig;
use crate::upper_bounds::join;

use super::PerturbationProblem;

/// The one-parameter bound
///
/// `f(t) = [||(A+B)^+ (tA - B)||^2 + t] / (1 + t) * ||X ∨ (Y/t)||`,
///
/// with `(A+B)^+` computed once up front.
pub struct Objective<'a> {
    problem: &'a PerturbationProblem,
    tol: ToleranceConfig,
    pinv_ab: CMatrix,
}

impl<'a> Objective<'a> {
    pub fn new(problem: &'a PerturbationProblem, tol: &ToleranceConfig) -> Result<Self> {
        let pinv_ab = pinv_psd(&(problem.a() + problem.b()), tol)?.into_hermitian().into_matrix();
        Ok(Self {
            problem,
            tol: *tol,
            pinv_ab,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!("t must be positive and finite, got {t}")));
        }
        let p = self.problem;
        let mix = p.a().as_matrix().scale(t) - p.b().as_matrix();
        let coupling = operator_norm(&(&self.pinv_ab * mix))?.powi(2);
        let upper = join(p.x(), &p.y().scaled(1.0 / t)?, &self.tol)?.join;
        Ok((coupling + t) / (1.0 + t) * spectral_norm(&upper)?)
    }
}

pub fn f_eval(p: &PerturbationProblem, t: f64, tol: &ToleranceConfig) -> Result<f64> {
    Objective::new(p, tol)?.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PsdMatrix;
    use crate::perturbation::{error_matrix, mu_coeff};
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_t() {
        let tol = ToleranceConfig::default();
        let i = PsdMatrix::identity(2);
        let p = PerturbationProblem::new(i.clone(), i.clone(), i.clone(), i).unwrap();
        for t in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(f_eval(&p, t, &tol).is_err());
        }
    }

    #[test]
    fn equal_pairs_attain_at_one() {
        let tol = ToleranceConfig::default();
        let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]], &tol).unwrap();
        let x = PsdMatrix::from_real_rows(&[&[0.5, -0.2], &[-0.2, 0.3]], &tol).unwrap();
        let p = PerturbationProblem::new(a.clone(), a, x.clone(), x.clone()).unwrap();
        let f1 = f_eval(&p, 1.0, &tol).unwrap();
        let half_x = 0.5 * spectral_norm(&x).unwrap();
        assert_abs_diff_eq!(f1, half_x, epsilon = 1e-13);
        assert_abs_diff_eq!(spectral_norm(&error_matrix(&p, &tol).unwrap()).unwrap(), half_x, epsilon = 1e-13);
    }

    #[test]
    fn value_at_one_is_mu_bound() {
        let tol = ToleranceConfig::default();
        let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]], &tol).unwrap();
        let b = PsdMatrix::diagonal(&[1.0, 3.0]).unwrap();
        let x = PsdMatrix::diagonal(&[0.2, 0.1]).unwrap();
        let y = PsdMatrix::from_real_rows(&[&[0.5, 0.4], &[0.4, 0.5]], &tol).unwrap();
        let p = PerturbationProblem::new(a.clone(), b.clone(), x.clone(), y.clone()).unwrap();
        let j = join(&x, &y, &tol).unwrap().join;
        let mu = mu_coeff(&a, &b, &tol).unwrap() * spectral_norm(&j).unwrap();
        assert_abs_diff_eq!(f_eval(&p, 1.0, &tol).unwrap(), mu, epsilon = 1e-13);
    }
}
