//! Functions of Hermitian matrices computed through the eigendecomposition.

use crate::eigen::EigenDecomposition;
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, HermitianMatrix, PsdMatrix};
use crate::tolerance::ToleranceConfig;

/// Rejects spectra that dip below the roundoff window under zero.
fn check_clamp_window(e: &EigenDecomposition, tol: &ToleranceConfig) -> Result<()> {
    let floor = tol.psd_floor(e.max_eigenvalue().max(0.0));
    if e.min_eigenvalue() < floor {
        return Err(Error::NotPsd {
            min_eigenvalue: e.min_eigenvalue(),
            allowed: floor,
        });
    }
    Ok(())
}

/// Moore-Penrose inverse of a PSD matrix.
///
/// Eigenvalues above `rank_cutoff * lambda_max` are inverted, the rest
/// (including clamped roundoff negatives) become zero.
pub fn pinv_psd(a: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let e = a.eig()?;
    Ok(PsdMatrix::assume_psd(pinv_from_eig(&e, a.dim(), tol)?))
}

pub(crate) fn pinv_from_eig(e: &EigenDecomposition, n: usize, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    check_clamp_window(e, tol)?;
    let lmax = e.max_eigenvalue();
    if lmax <= 0.0 {
        return Ok(HermitianMatrix::zeros(n));
    }
    let cutoff = tol.rank_cutoff(n) * lmax;
    Ok(HermitianMatrix::from_hermitian_part(
        e.map(|x| if x > cutoff { 1.0 / x } else { 0.0 }),
    ))
}

/// Norms of `AA^+A - A`, `A^+AA^+ - A^+`, `(AA^+)* - AA^+`, `(A^+A)* - A^+A`,
/// together with `||A||` and `||A^+||` for scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenroseResiduals {
    pub residuals: [f64; 4],
    pub norm: f64,
    pub pinv_norm: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// All four residuals within `residual_tol (1 + ||A|| + ||A^+||)`.
    pub fn within(&self, tol: &ToleranceConfig) -> bool {
        self.max() <= tol.residual_tol * (1.0 + self.norm + self.pinv_norm)
    }
}

pub fn penrose_residuals(a: &PsdMatrix, tol: &ToleranceConfig) -> Result<PenroseResiduals> {
    let ap = pinv_psd(a, tol)?;
    let (m, mp) = (a.as_matrix(), ap.as_matrix());
    let amp = m * mp;
    let mpa = mp * m;
    Ok(PenroseResiduals {
        residuals: [
            operator_norm(&(&amp * m - m))?,
            operator_norm(&(&mpa * mp - mp))?,
            operator_norm(&(amp.adjoint() - &amp))?,
            operator_norm(&(mpa.adjoint() - &mpa))?,
        ],
        norm: spectral_norm(a)?,
        pinv_norm: spectral_norm(&ap)?,
    })
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(a: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let e = a.eig()?;
    check_clamp_window(&e, tol)?;
    Ok(PsdMatrix::assume_psd(HermitianMatrix::from_hermitian_part(
        e.map(|x| x.max(0.0).sqrt()),
    )))
}

/// Largest absolute eigenvalue, which is the 2-norm for Hermitian input.
pub fn spectral_norm(m: &HermitianMatrix) -> Result<f64> {
    Ok(m.eig()?.max_abs_eigenvalue())
}

/// Spectral absolute value `|M| = (M^2)^(1/2)`.
pub fn abs_hermitian(m: &HermitianMatrix) -> Result<PsdMatrix> {
    let e = m.eig()?;
    Ok(PsdMatrix::assume_psd(HermitianMatrix::from_hermitian_part(
        e.map(f64::abs),
    )))
}

/// `A >= B` in the Loewner order, i.e. `A - B` is PSD up to
/// `psd_tol (1 + ||A - B||)`.
pub fn loewner_geq(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    a.ensure_same_dim(b)?;
    let e = (a - b).eig()?;
    Ok(e.min_eigenvalue() >= tol.psd_floor(e.max_abs_eigenvalue()))
}

/// Smallest eigenvalue of `A - B`; non-negative exactly when `A >= B`.
pub fn loewner_margin(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    a.ensure_same_dim(b)?;
    Ok((a - b).eig()?.min_eigenvalue())
}

/// Range inclusion `R(A) ⊆ R(B)`, decided by `||B B^+ A - A|| <= residual_tol (1 + ||A||)`.
pub fn range_contained(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<bool> {
    a.ensure_same_dim(b)?;
    let bp = pinv_psd(b, tol)?;
    let am = a.as_matrix();
    let proj_a = b.as_matrix() * bp.as_matrix() * am;
    let resid = crate::matrix::operator_norm(&(proj_a - am))?;
    Ok(resid <= tol.residual_tol * (1.0 + spectral_norm(a)?))
}

/// Number of eigenvalues above `rank_cutoff * lambda_max`.
pub fn numerical_rank(a: &PsdMatrix, tol: &ToleranceConfig) -> Result<usize> {
    let e = a.eig()?;
    let lmax = e.max_eigenvalue();
    if lmax <= 0.0 {
        return Ok(0);
    }
    let cutoff = tol.rank_cutoff(a.dim()) * lmax;
    Ok(e.eigenvalues().iter().filter(|&&x| x > cutoff).count())
}
