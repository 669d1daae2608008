use crate::error::Result;
use crate::matrix::{operator_norm, CMatrix, HermitianMatrix, PsdMatrix};
use crate::parallel_sum::{harmonic_norm_bound, parallel_sum, parallel_sum_hermitian};
use crate::spectral::{pinv_psd, spectral_norm};
use crate::tolerance::ToleranceConfig;
use crate::upper_bounds::{check_positive, join, join_scaled};

use super::PerturbationProblem;

fn pinv_of_sum(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<CMatrix> {
    Ok(pinv_psd(&(a + b), tol)?.into_hermitian().into_matrix())
}

/// `E = (A+X):(B+Y) - A:B`.
pub fn error_matrix(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let perturbed = parallel_sum_hermitian(&(p.a() + p.x()), &(p.b() + p.y()), tol)?;
    let base = parallel_sum_hermitian(p.a(), p.b(), tol)?;
    PsdMatrix::new(&perturbed - &base, tol)
}

/// `H = (A+X):(B+Y) - A:B - X:Y` and `T = (A+B):(X+Y)`.
pub fn h_and_t(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<(HermitianMatrix, PsdMatrix)> {
    let perturbed = parallel_sum_hermitian(&(p.a() + p.x()), &(p.b() + p.y()), tol)?;
    let ab = parallel_sum_hermitian(p.a(), p.b(), tol)?;
    let xy = parallel_sum_hermitian(p.x(), p.y(), tol)?;
    let h = &(&perturbed - &ab) - &xy;
    let t = parallel_sum(&(p.a() + p.b()), &(p.x() + p.y()), tol)?;
    Ok((h, t))
}

/// `||H - S* T S||` with `S = (A+B)^+ B - (X+Y)^+ Y`.
pub fn factorization_residual(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<f64> {
    let (h, t) = h_and_t(p, tol)?;
    let s = pinv_of_sum(p.a(), p.b(), tol)? * p.b().as_matrix() - pinv_of_sum(p.x(), p.y(), tol)? * p.y().as_matrix();
    let factored = s.adjoint() * t.as_matrix() * &s;
    operator_norm(&(h.as_matrix() - factored))
}

/// `G = (A+X):B - A:B`.
pub fn one_sided_error(a: &PsdMatrix, b: &PsdMatrix, x: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    a.ensure_same_dim(b)?;
    a.ensure_same_dim(x)?;
    let perturbed = parallel_sum_hermitian(&(a + x), b, tol)?;
    let base = parallel_sum_hermitian(a, b, tol)?;
    PsdMatrix::new(&perturbed - &base, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedBounds {
    /// `||(A+B)^+ B||^2 ||A+B|| ||X|| / (||A+B|| + ||X||)`
    pub sharp: f64,
    /// `||(A+B)^+ B||^2 ||X||`
    pub classical: f64,
}

pub fn one_sided_bounds(a: &PsdMatrix, b: &PsdMatrix, x: &PsdMatrix, tol: &ToleranceConfig) -> Result<OneSidedBounds> {
    a.ensure_same_dim(b)?;
    a.ensure_same_dim(x)?;
    let coupling = operator_norm(&(pinv_of_sum(a, b, tol)? * b.as_matrix()))?.powi(2);
    let n_ab = spectral_norm(&(a + b))?;
    let n_x = spectral_norm(x)?;
    Ok(OneSidedBounds {
        sharp: coupling * harmonic_norm_bound(n_ab, n_x),
        classical: coupling * n_x,
    })
}

/// `||G - K* ((A+B):X) K||` with `K = (A+B)^+ B`.
pub fn one_sided_factorization_residual(a: &PsdMatrix, b: &PsdMatrix, x: &PsdMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let g = one_sided_error(a, b, x, tol)?;
    let k = pinv_of_sum(a, b, tol)? * b.as_matrix();
    let t = parallel_sum(&(a + b), x, tol)?;
    operator_norm(&(g.as_matrix() - k.adjoint() * t.as_matrix() * &k))
}

/// `F = (A + alpha Z):(B + beta Z) - A:B`.
pub fn two_sided_shared_error(
    a: &PsdMatrix,
    b: &PsdMatrix,
    z: &PsdMatrix,
    alpha: f64,
    beta: f64,
    tol: &ToleranceConfig,
) -> Result<PsdMatrix> {
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    let p = PerturbationProblem::new(a.clone(), b.clone(), z.scaled(alpha)?, z.scaled(beta)?)?;
    error_matrix(&p, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharedBounds {
    pub refined: f64,
    pub simplified: f64,
}

/// `||(A+B)^+ (beta A - alpha B)||^2`
fn weighted_coupling(pinv_ab: &CMatrix, a: &PsdMatrix, b: &PsdMatrix, alpha: f64, beta: f64) -> Result<f64> {
    let mix = a.as_matrix().scale(beta) - b.as_matrix().scale(alpha);
    Ok(operator_norm(&(pinv_ab * mix))?.powi(2))
}

/// Bounds on `||F||` for a perturbation `(alpha Z, beta Z)` sharing one
/// direction `Z`.
pub fn two_sided_shared_bounds(
    a: &PsdMatrix,
    b: &PsdMatrix,
    z: &PsdMatrix,
    alpha: f64,
    beta: f64,
    tol: &ToleranceConfig,
) -> Result<SharedBounds> {
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    a.ensure_same_dim(b)?;
    a.ensure_same_dim(z)?;
    let c = weighted_coupling(&pinv_of_sum(a, b, tol)?, a, b, alpha, beta)?;
    let n_ab = spectral_norm(&(a + b))?;
    let n_z = spectral_norm(z)?;
    let s = alpha + beta;
    let damp = if n_ab + s * n_z == 0.0 { 0.0 } else { n_ab / (n_ab + s * n_z) };
    Ok(SharedBounds {
        refined: (c * damp + alpha * beta) * n_z / s,
        simplified: (c + alpha * beta) * n_z / s,
    })
}

/// `2 ||(A+B)^+ A||^2 + 2 ||(A+B)^+ B||^2 + 1/2`.
pub fn lambda_coeff(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<f64> {
    a.ensure_same_dim(b)?;
    let sp = pinv_of_sum(a, b, tol)?;
    let na = operator_norm(&(&sp * a.as_matrix()))?;
    let nb = operator_norm(&(&sp * b.as_matrix()))?;
    Ok(2.0 * na * na + 2.0 * nb * nb + 0.5)
}

/// `(||(A+B)^+ (A - B)||^2 + 1) / 2`.
pub fn mu_coeff(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<f64> {
    a.ensure_same_dim(b)?;
    let c = weighted_coupling(&pinv_of_sum(a, b, tol)?, a, b, 1.0, 1.0)?;
    Ok(0.5 * (c + 1.0))
}

/// The two-parameter bound on `||E||` built from `Z = (X/alpha) ∨ (Y/beta)`:
///
/// `[c ||A+B|| / ((alpha+beta) ||A+B|| + (alpha+beta)^2 ||Z||) + alpha beta / (alpha+beta)] ||Z||`
///
/// with `c = ||(A+B)^+ (beta A - alpha B)||^2`.
pub fn parameterized_bound(p: &PerturbationProblem, alpha: f64, beta: f64, tol: &ToleranceConfig) -> Result<f64> {
    let z = join_scaled(p.x(), p.y(), alpha, beta, tol)?;
    let n_z = spectral_norm(&z)?;
    let c = weighted_coupling(&pinv_of_sum(p.a(), p.b(), tol)?, p.a(), p.b(), alpha, beta)?;
    let n_ab = spectral_norm(&(p.a() + p.b()))?;
    let s = alpha + beta;
    let denom = s * n_ab + s * s * n_z;
    let first = if denom == 0.0 { 0.0 } else { c * n_ab / denom };
    Ok((first + alpha * beta / s) * n_z)
}

/// `mu(A,B) ||X ∨ Y||`.
pub(crate) fn mu_bound(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<f64> {
    let j = join(p.x(), p.y(), tol)?.join;
    Ok(mu_coeff(p.a(), p.b(), tol)? * spectral_norm(&j)?)
}
