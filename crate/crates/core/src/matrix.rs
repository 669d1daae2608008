//! Validated Hermitian and positive semi-definite matrix newtypes.

use std::ops::{Add, Deref, Sub};

use nalgebra::{Complex, DMatrix};

use crate::eigen::{jacobi, EigenDecomposition};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Spectral norm (largest singular value) of an arbitrary square matrix.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    let gram = hermitian_part(&(m.adjoint() * m));
    Ok(jacobi(&gram)?.max_eigenvalue().max(0.0).sqrt())
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn check_shape(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.is_empty() {
        return Err(Error::Empty);
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Dense square complex matrix that is Hermitian.
///
/// Inputs are accepted when `||M - M*|| <= psd_tol (1 + ||M||)` and then
/// replaced by `(M + M*) / 2`, so every stored value is exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        check_shape(&m)?;
        let skew = &m - m.adjoint();
        let deviation = operator_norm(&skew)?;
        let allowed = tol.psd_tol * (1.0 + operator_norm(&m)?);
        if deviation > allowed {
            return Err(Error::NotHermitian { deviation, allowed });
        }
        Ok(Self::from_hermitian_part(m))
    }

    /// Real symmetric input embedded with zero imaginary part.
    pub fn from_real(m: DMatrix<f64>, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(m.map(|x| Complex::new(x, 0.0)), tol)
    }

    pub fn from_real_rows(rows: &[&[f64]], tol: &ToleranceConfig) -> Result<Self> {
        Self::new(real_rows(rows)?, tol)
    }

    /// Keeps the Hermitian part of `m` without checking how far it was off.
    /// Used for quantities that are Hermitian in exact arithmetic.
    pub(crate) fn from_hermitian_part(m: CMatrix) -> Self {
        Self {
            data: hermitian_part(&m),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: CMatrix::identity(n, n),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            data: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex::new(values[i], 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        jacobi(&self.data)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.scale(s),
        }
    }

    /// Fails with `DimensionMismatch` unless `other` has the same size.
    pub fn ensure_same_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Largest absolute difference between entries.
    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

/// Hermitian matrix whose smallest eigenvalue is at least
/// `-psd_tol (1 + largest eigenvalue)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix(HermitianMatrix);

impl PsdMatrix {
    pub fn new(m: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let e = m.eig()?;
        let floor = tol.psd_floor(e.max_eigenvalue().max(0.0));
        if e.min_eigenvalue() < floor {
            return Err(Error::NotPsd {
                min_eigenvalue: e.min_eigenvalue(),
                allowed: floor,
            });
        }
        Ok(Self(m))
    }

    pub fn from_matrix(m: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianMatrix::new(m, tol)?, tol)
    }

    pub fn from_real_rows(rows: &[&[f64]], tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_rows(rows, tol)?, tol)
    }

    /// Wraps a matrix known to be PSD in exact arithmetic without checking.
    pub(crate) fn assume_psd(m: HermitianMatrix) -> Self {
        Self(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self(HermitianMatrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self(HermitianMatrix::identity(n))
    }

    /// `k I_n`.
    pub fn scalar(n: usize, k: f64) -> Result<Self> {
        Self::diagonal(&vec![k; n])
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "diagonal entry {v} is not a non-negative number"
            )));
        }
        Ok(Self(HermitianMatrix::diagonal(values)))
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    /// `s M` for `s >= 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "PSD matrices can only be scaled by non-negative factors, got {s}"
            )));
        }
        Ok(Self(self.0.scale(s)))
    }
}

impl Deref for PsdMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

impl Add for &PsdMatrix {
    type Output = PsdMatrix;
    fn add(self, rhs: &PsdMatrix) -> PsdMatrix {
        PsdMatrix(&self.0 + &rhs.0)
    }
}

fn real_rows(rows: &[&[f64]]) -> Result<CMatrix> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: r.len(),
        });
    }
    Ok(CMatrix::from_fn(n, n, |i, j| Complex::new(rows[i][j], 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let tol = ToleranceConfig::default();
        let err = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]], &tol).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn symmetrizes_within_tolerance() {
        let tol = ToleranceConfig::default();
        let m = HermitianMatrix::from_real_rows(&[&[1.0, 0.5 + 1e-12], &[0.5, 1.0]], &tol).unwrap();
        assert_eq!(m.as_matrix()[(0, 1)], m.as_matrix()[(1, 0)]);
    }

    #[test]
    fn rejects_indefinite() {
        let tol = ToleranceConfig::default();
        let err = PsdMatrix::from_real_rows(&[&[-1.0, 0.0], &[0.0, 1.0]], &tol).unwrap_err();
        assert!(matches!(err, Error::NotPsd { .. }));
    }

    #[test]
    fn accepts_roundoff_negative_eigenvalue() {
        let tol = ToleranceConfig::default();
        PsdMatrix::new(HermitianMatrix::diagonal(&[1.0, -1e-12]), &tol).unwrap();
    }

    #[test]
    fn shape_errors() {
        let tol = ToleranceConfig::default();
        assert!(matches!(
            HermitianMatrix::new(CMatrix::zeros(2, 3), &tol),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        assert!(matches!(HermitianMatrix::new(CMatrix::zeros(0, 0), &tol), Err(Error::Empty)));
        let mut m = CMatrix::identity(2, 2);
        m[(1, 0)] = Complex::new(f64::NAN, 0.0);
        assert!(matches!(HermitianMatrix::new(m, &tol), Err(Error::NonFinite { row: 1, col: 0 })));
    }

    #[test]
    fn operator_norm_of_nilpotent() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex::new(3.0, 4.0);
        assert!((operator_norm(&m).unwrap() - 5.0).abs() < 1e-14);
    }
}
