//! The parallel sum `A:B = A (A+B)^+ B` and its classical properties.

use crate::error::{Error, Result};
use crate::matrix::{operator_norm, HermitianMatrix, PsdMatrix};
use crate::spectral::{pinv_psd, spectral_norm};
use crate::tolerance::ToleranceConfig;

/// `A (A+B)^+ B` before the positivity check.
pub(crate) fn parallel_sum_hermitian(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    a.ensure_same_dim(b)?;
    let s_pinv = pinv_psd(&(a + b), tol)?;
    Ok(HermitianMatrix::from_hermitian_part(
        a.as_matrix() * s_pinv.as_matrix() * b.as_matrix(),
    ))
}

/// Parallel sum `A:B`. `A = B = 0` gives the zero matrix.
pub fn parallel_sum(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    PsdMatrix::new(parallel_sum_hermitian(a, b, tol)?, tol)
}

/// Deviations of `A:B` from the three equivalent forms `B:A`,
/// `A - A(A+B)^+ A` and `B - B(A+B)^+ B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    pub swapped: f64,
    pub via_a: f64,
    pub via_b: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.swapped.max(self.via_a).max(self.via_b)
    }
}

pub fn parallel_sum_identity_residuals(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<IdentityResiduals> {
    a.ensure_same_dim(b)?;
    let s_pinv = pinv_psd(&(a + b), tol)?;
    let (am, bm, sp) = (a.as_matrix(), b.as_matrix(), s_pinv.as_matrix());
    // raw products, no symmetrization, so the swap residual is meaningful
    let ab = am * sp * bm;
    let ba = bm * sp * am;
    let via_a = am - am * sp * am;
    let via_b = bm - bm * sp * bm;
    Ok(IdentityResiduals {
        swapped: operator_norm(&(&ab - ba))?,
        via_a: operator_norm(&(&ab - via_a))?,
        via_b: operator_norm(&(&ab - via_b))?,
    })
}

/// `||A|| ||B|| / (||A|| + ||B||)`, taken as zero when both norms vanish.
pub fn parallel_sum_norm_bound(a: &PsdMatrix, b: &PsdMatrix) -> Result<f64> {
    a.ensure_same_dim(b)?;
    Ok(harmonic_norm_bound(spectral_norm(a)?, spectral_norm(b)?))
}

pub(crate) fn harmonic_norm_bound(na: f64, nb: f64) -> f64 {
    if na + nb == 0.0 {
        0.0
    } else {
        na * nb / (na + nb)
    }
}

/// Checks `||P^2 - P|| <= residual_tol`.
pub fn check_projection(p: &HermitianMatrix, tol: &ToleranceConfig) -> Result<()> {
    let m = p.as_matrix();
    let residual = operator_norm(&(m * m - m))?;
    if residual > tol.residual_tol {
        return Err(Error::NotProjection { residual });
    }
    Ok(())
}

/// Orthogonal projector onto `R(P) ∩ R(Q)` for orthogonal projections `P`
/// and `Q`, read off as the eigenvalue-2 eigenspace of `P + Q`.
pub fn range_intersection_projector(p: &PsdMatrix, q: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    p.ensure_same_dim(q)?;
    check_projection(p, tol)?;
    check_projection(q, tol)?;
    let e = (p + q).eig()?;
    let window = tol.residual_tol;
    Ok(PsdMatrix::assume_psd(HermitianMatrix::from_hermitian_part(
        e.spectral_projector(|lam| (lam - 2.0).abs() <= window),
    )))
}
