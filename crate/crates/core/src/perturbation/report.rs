use crate::error::Result;
use crate::spectral::spectral_norm;
use crate::tolerance::ToleranceConfig;

use super::bounds::{error_matrix, lambda_coeff, mu_bound, mu_coeff};
use super::optimize::{minimize_f, OptimizerConfig};
use super::PerturbationProblem;

/// `||E||` next to the three bounds it is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub error_norm: f64,
    pub lambda: f64,
    pub mu: f64,
    /// `lambda(A,B) ||X + Y||`
    pub ad_bound: f64,
    /// `inf_{t>0} f(t)`
    pub f_inf_bound: f64,
    pub f_argmin: f64,
    /// `mu(A,B) ||X ∨ Y||`
    pub mu_bound: f64,
    /// `bound / ||E|| - 1` for the AD, infimum and mu bounds, in that order.
    /// `None` when `||E|| = 0`.
    pub relative_errors: [Option<f64>; 3],
}

impl BoundReport {
    pub fn bounds(&self) -> [f64; 3] {
        [self.ad_bound, self.f_inf_bound, self.mu_bound]
    }

    pub fn relative_errors_percent(&self) -> [Option<f64>; 3] {
        self.relative_errors.map(|r| r.map(|v| 100.0 * v))
    }
}

pub fn bound_report(p: &PerturbationProblem, cfg: &OptimizerConfig, tol: &ToleranceConfig) -> Result<BoundReport> {
    let error_norm = spectral_norm(error_matrix(p, tol)?.as_hermitian())?;
    let lambda = lambda_coeff(p.a(), p.b(), tol)?;
    let mu = mu_coeff(p.a(), p.b(), tol)?;
    let ad_bound = lambda * spectral_norm(&(p.x() + p.y()))?;
    let min = minimize_f(p, cfg, tol)?;
    let mu_bound = mu_bound(p, tol)?;
    let relative = |bound: f64| (error_norm > 0.0).then(|| bound / error_norm - 1.0);
    Ok(BoundReport {
        error_norm,
        lambda,
        mu,
        ad_bound,
        f_inf_bound: min.value,
        f_argmin: min.t,
        mu_bound,
        relative_errors: [relative(ad_bound), relative(min.value), relative(mu_bound)],
    })
}
