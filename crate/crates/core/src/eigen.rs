//! Dense Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slower than tridiagonal QR but computes small eigenvalues of
//! positive semi-definite matrices to high relative accuracy, which is what
//! the rank decisions inside the pseudoinverse depend on.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, C64};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues in ascending order together with a unitary matrix whose
/// columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Largest eigenvalue in absolute value.
    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// `U f(diag(lambda)) U*`, i.e. the spectral function calculus.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        scaled * u.adjoint()
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue
    /// satisfies `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        self.map(|lam| if keep(lam) { 1.0 } else { 0.0 })
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    jacobi(m.as_matrix())
}

/// Runs the Jacobi iteration on `a`, which must be exactly Hermitian.
pub(crate) fn jacobi(a: &CMatrix) -> Result<EigenDecomposition> {
    let n = a.nrows();
    // column-major working copies
    let mut a: Vec<C64> = a.as_slice().to_vec();
    let mut v: Vec<C64> = CMatrix::identity(n, n).as_slice().to_vec();
    for i in 0..n {
        a[i + i * n].im = 0.0;
    }

    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // off-diagonal entries below this are left in place
    let floor = f64::EPSILON * f64::EPSILON * frob;
    let mut converged = n <= 1 || frob == 0.0;
    let mut sweeps = 0;

    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p + q * n];
                let mag = apq.norm();
                let app = a[p + p * n].re;
                let aqq = a[q + q * n].re;
                if mag <= floor || mag <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, n, p, q, apq / mag, mag, app, aqq);
            }
        }
        converged = !rotated;
    }

    if !converged {
        return Err(Error::NoConvergence { dim: n, sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i + i * n].re.total_cmp(&a[j + j * n].re));
    let eigenvalues = order.iter().map(|&i| a[i + i * n].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[i + order[j] * n]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `a[p, q]` with the unitary that first moves the pivot's
/// phase onto column `q` and then applies a real Givens rotation.
///
/// Only columns `p` and `q` are computed; rows follow by Hermitian symmetry.
#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize, phase: C64, mag: f64, app: f64, aqq: f64) {
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let conj_phase = phase.conj();

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let x = a[r + p * n];
        let y = a[r + q * n] * conj_phase;
        let xp = x * c - y * s;
        let xq = x * s + y * c;
        a[r + p * n] = xp;
        a[r + q * n] = xq;
        a[p + r * n] = xp.conj();
        a[q + r * n] = xq.conj();
    }
    for r in 0..n {
        let x = v[r + p * n];
        let y = v[r + q * n] * conj_phase;
        v[r + p * n] = x * c - y * s;
        v[r + q * n] = x * s + y * c;
    }

    a[p + p * n] = Complex::new(app - t * mag, 0.0);
    a[q + q * n] = Complex::new(aqq + t * mag, 0.0);
    a[p + q * n] = Complex::new(0.0, 0.0);
    a[q + p * n] = Complex::new(0.0, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::HermitianMatrix;
    use crate::tolerance::ToleranceConfig;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn residuals(m: &HermitianMatrix, e: &EigenDecomposition) -> (f64, f64) {
        let n = m.dim();
        let recon = e.map(|x| x);
        let r1 = (recon - m.as_matrix()).norm();
        let u = e.eigenvectors();
        let r2 = (u.adjoint() * u - CMatrix::identity(n, n)).norm();
        (r1, r2)
    }

    #[test]
    fn diagonal_input() {
        let m = HermitianMatrix::diagonal(&[3.0, 1.0]);
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.eigenvalues(), &[1.0, 3.0]);
        // a permutation of the identity columns
        let u = e.eigenvectors();
        assert_abs_diff_eq!(u[(1, 0)].norm(), 1.0);
        assert_abs_diff_eq!(u[(0, 1)].norm(), 1.0);
    }

    #[test]
    fn identity_input() {
        let e = eig_hermitian(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues(), &[1.0, 1.0]);
    }

    #[test]
    fn swap_matrix() {
        let tol = ToleranceConfig::default();
        let m = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]], &tol).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert_abs_diff_eq!(e.eigenvalues()[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.eigenvalues()[1], 1.0, epsilon = 1e-15);
        let (r1, r2) = residuals(&m, &e);
        assert!(r1 < 1e-14 && r2 < 1e-14);
    }

    #[test]
    fn complex_hermitian_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let tol = ToleranceConfig::default();
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(2.0, 0.0),
                Complex::new(0.0, 1.0),
                Complex::new(0.0, -1.0),
                Complex::new(2.0, 0.0),
            ],
        );
        let m = HermitianMatrix::new(m, &tol).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert_abs_diff_eq!(e.eigenvalues()[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues()[1], 3.0, epsilon = 1e-14);
        let (r1, r2) = residuals(&m, &e);
        assert!(r1 < 1e-14 && r2 < 1e-14);
    }

    #[test]
    fn matches_nalgebra_on_real_symmetric() {
        let tol = ToleranceConfig::default();
        let n = 7;
        let g = DMatrix::<f64>::from_fn(n, n, |i, j| ((i * 7 + j * 13) % 11) as f64 - 5.0 + 0.1 * i as f64);
        let s = &g + g.transpose();
        let reference = s.clone().symmetric_eigen();
        let mut expected: Vec<f64> = reference.eigenvalues.iter().copied().collect();
        expected.sort_by(f64::total_cmp);
        let m = HermitianMatrix::from_real(s, &tol).unwrap();
        let e = eig_hermitian(&m).unwrap();
        for (got, want) in e.eigenvalues().iter().zip(&expected) {
            assert_abs_diff_eq!(*got, *want, epsilon = 1e-11);
        }
        let (r1, r2) = residuals(&m, &e);
        assert!(r1 < 1e-12 && r2 < 1e-13, "{r1} {r2}");
    }

    #[test]
    fn empty_and_scalar() {
        let e = jacobi(&CMatrix::zeros(0, 0)).unwrap();
        assert_eq!(e.dim(), 0);
        let e = eig_hermitian(&HermitianMatrix::diagonal(&[-2.5])).unwrap();
        assert_eq!(e.eigenvalues(), &[-2.5]);
    }
}
