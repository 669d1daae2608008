//! Common upper bounds of two PSD matrices in the Loewner order.
//!
//! Three constructions are provided:
//!
//! * `C(X,Y) = X + Y - X:Y`, the classical bound;
//! * the join `X ∨ Y = (X+Y)/2 + (X+Y)^(1/2) W^(1/2) (X+Y)^(1/2)` with
//!   `W = [(X+Y)^+]^(1/2) ((X+Y)/4 - X:Y) [(X+Y)^+]^(1/2)`, which never
//!   exceeds `C(X,Y)` and agrees with it only when `X:Y = 0`;
//! * closed forms of the join for commuting pairs and for projections.

use crate::error::{Error, Result};
use crate::matrix::{operator_norm, HermitianMatrix, PsdMatrix};
use crate::parallel_sum::{parallel_sum, range_intersection_projector};
use crate::spectral::{abs_hermitian, spectral_norm};
use crate::tolerance::ToleranceConfig;

/// `X + Y - X:Y`.
pub fn c_bound(x: &PsdMatrix, y: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let xy = parallel_sum(x, y, tol)?;
    PsdMatrix::new(&(x + y).into_hermitian() - &xy, tol)
}

/// The join together with the intermediate matrices that certify it.
#[derive(Debug, Clone)]
pub struct JoinWitness {
    pub join: PsdMatrix,
    pub w: PsdMatrix,
    /// `(X+Y)/4 - X:Y`
    pub quarter_gap: HermitianMatrix,
}

pub fn join(x: &PsdMatrix, y: &PsdMatrix, tol: &ToleranceConfig) -> Result<JoinWitness> {
    x.ensure_same_dim(y)?;
    let n = x.dim();
    let sum = x + y;
    let es = sum.eig()?;
    let lmax = es.max_eigenvalue();
    if es.min_eigenvalue() < tol.psd_floor(lmax.max(0.0)) {
        return Err(Error::NotPsd {
            min_eigenvalue: es.min_eigenvalue(),
            allowed: tol.psd_floor(lmax.max(0.0)),
        });
    }
    let cutoff = tol.rank_cutoff(n) * lmax.max(0.0);
    let keep = |v: f64| lmax > 0.0 && v > cutoff;

    let sum_pinv = es.map(|v| if keep(v) { 1.0 / v } else { 0.0 });
    let pinv_sqrt = es.map(|v| if keep(v) { 1.0 / v.sqrt() } else { 0.0 });
    let sum_sqrt = es.map(|v| v.max(0.0).sqrt());

    let xy = HermitianMatrix::from_hermitian_part(x.as_matrix() * &sum_pinv * y.as_matrix());
    let quarter_gap = &sum.as_hermitian().scale(0.25) - &xy;

    let w = HermitianMatrix::from_hermitian_part(&pinv_sqrt * quarter_gap.as_matrix() * &pinv_sqrt);
    let ew = w.eig()?;
    let floor = tol.psd_floor(ew.max_abs_eigenvalue());
    if ew.min_eigenvalue() < floor {
        return Err(Error::NumericalBreakdown(format!(
            "W has eigenvalue {:.3e} below the clamp window {:.3e}",
            ew.min_eigenvalue(),
            floor
        )));
    }
    // S/4 - X:Y = D S^+ D with D = (X - Y)/2, so W = K^2 for the Hermitian
    // K below and W^(1/2) = |K|. Taking |K| avoids the square root of a
    // matrix with roundoff-level eigenvalues.
    let half_diff = (x.as_hermitian() - y.as_hermitian()).scale(0.5);
    let k = HermitianMatrix::from_hermitian_part(&pinv_sqrt * half_diff.as_matrix() * &pinv_sqrt);
    let w_sqrt = k.eig()?.map(f64::abs);

    let join = HermitianMatrix::from_hermitian_part(
        sum.as_matrix().scale(0.5) + &sum_sqrt * w_sqrt * &sum_sqrt,
    );
    Ok(JoinWitness {
        join: PsdMatrix::assume_psd(join),
        w: PsdMatrix::assume_psd(w),
        quarter_gap,
    })
}

/// `||XY - YX||`.
pub fn commutator_norm(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    x.ensure_same_dim(y)?;
    let (xm, ym) = (x.as_matrix(), y.as_matrix());
    operator_norm(&(xm * ym - ym * xm))
}

/// `(X + Y + |X - Y|) / 2` for commuting `X`, `Y`.
pub fn join_commuting(x: &PsdMatrix, y: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let residual = commutator_norm(x, y)?;
    let allowed = tol.residual_tol * (1.0 + spectral_norm(x)? * spectral_norm(y)?);
    if residual > allowed {
        return Err(Error::NonCommuting { residual, allowed });
    }
    let diff = abs_hermitian(&(x.as_hermitian() - y.as_hermitian()))?;
    let sum = (x + y).into_hermitian();
    Ok(PsdMatrix::assume_psd((&sum + diff.as_hermitian()).scale(0.5)))
}

/// `P + Q - P0` for orthogonal projections, `P0` projecting onto `R(P) ∩ R(Q)`.
pub fn join_projections(p: &PsdMatrix, q: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let p0 = range_intersection_projector(p, q, tol)?;
    let sum = (p + q).into_hermitian();
    Ok(PsdMatrix::assume_psd(&sum - p0.as_hermitian()))
}

/// `Z = (X / alpha) ∨ (Y / beta)`, so that `alpha Z >= X` and `beta Z >= Y`.
pub fn join_scaled(x: &PsdMatrix, y: &PsdMatrix, alpha: f64, beta: f64, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    Ok(join(&x.scaled(1.0 / alpha)?, &y.scaled(1.0 / beta)?, tol)?.join)
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

/// How far the join sits below `C(X,Y)`, next to the size of `X:Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CBoundComparison {
    /// `||C(X,Y) - X ∨ Y||`
    pub gap: f64,
    /// `||X:Y||`
    pub parallel_sum_norm: f64,
}

impl CBoundComparison {
    pub fn join_equals_c_bound(&self, tol: &ToleranceConfig) -> bool {
        self.gap <= tol.residual_tol
    }

    pub fn parallel_sum_vanishes(&self, tol: &ToleranceConfig) -> bool {
        self.parallel_sum_norm <= tol.residual_tol
    }

    /// Both sides of "join = C(X,Y) iff X:Y = 0" decided the same way.
    /// The gap shrinks like `||X:Y||^2`, so pairs with a tiny but nonzero
    /// parallel sum can read as inconsistent.
    pub fn consistent(&self, tol: &ToleranceConfig) -> bool {
        self.join_equals_c_bound(tol) == self.parallel_sum_vanishes(tol)
    }
}

pub fn compare_with_c_bound(x: &PsdMatrix, y: &PsdMatrix, tol: &ToleranceConfig) -> Result<CBoundComparison> {
    let j = join(x, y, tol)?.join;
    let c = c_bound(x, y, tol)?;
    let xy = parallel_sum(x, y, tol)?;
    Ok(CBoundComparison {
        gap: spectral_norm(&(c.as_hermitian() - j.as_hermitian()))?,
        parallel_sum_norm: spectral_norm(&xy)?,
    })
}
