//! Test-problem generators: the two fixed 2x2 examples and random PSD data.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, PsdMatrix, C64};
use crate::perturbation::PerturbationProblem;
use crate::tolerance::ToleranceConfig;

fn real_2x2(a: f64, b: f64, d: f64) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(CMatrix::from_row_slice(
        2,
        2,
        &[Complex::new(a, 0.0), Complex::new(b, 0.0), Complex::new(b, 0.0), Complex::new(d, 0.0)],
    ))
}

/// `[[cos t, sin(t)/4], [sin(t)/4, cos t]]`
pub fn a_of_t(t: f64) -> HermitianMatrix {
    real_2x2(t.cos(), t.sin() / 4.0, t.cos())
}

/// `[[cos t, -sin(t)/4], [-sin(t)/4, cos t]]`
pub fn b_of_t(t: f64) -> HermitianMatrix {
    real_2x2(t.cos(), -t.sin() / 4.0, t.cos())
}

/// Rank-one orthogonal projection
/// `[[cos^2 t, -sin t cos t], [-sin t cos t, sin^2 t]]`.
pub fn projection_at_angle(t: f64) -> PsdMatrix {
    let (s, c) = t.sin_cos();
    PsdMatrix::assume_psd(real_2x2(c * c, -s * c, s * s))
}

/// Angles (radians) for the first example: `A = A(base)`,
/// `X = A(a_perturbed) - A(base)`, `B = B(base)`, `Y = B(b_perturbed) - B(base)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleOneParams {
    pub base: f64,
    pub a_perturbed: f64,
    pub b_perturbed: f64,
}

impl Default for ExampleOneParams {
    fn default() -> Self {
        Self {
            base: PI / 6.0,
            a_perturbed: 5.0 * PI / 32.0,
            b_perturbed: 3.0 * PI / 32.0,
        }
    }
}

pub fn example_one(params: &ExampleOneParams, tol: &ToleranceConfig) -> Result<PerturbationProblem> {
    for (name, t) in [
        ("base", params.base),
        ("a_perturbed", params.a_perturbed),
        ("b_perturbed", params.b_perturbed),
    ] {
        if !(t > 0.0 && t < PI / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} angle {t} is outside (0, pi/2)"
            )));
        }
    }
    let a = PsdMatrix::new(a_of_t(params.base), tol)?;
    let b = PsdMatrix::new(b_of_t(params.base), tol)?;
    let x = PsdMatrix::new(&a_of_t(params.a_perturbed) - a.as_hermitian(), tol)?;
    let y = PsdMatrix::new(&b_of_t(params.b_perturbed) - b.as_hermitian(), tol)?;
    PerturbationProblem::new(a, b, x, y)
}

/// Projection angles for the second example, in the order `A, B, X, Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleTwoParams {
    pub angles: [f64; 4],
}

impl Default for ExampleTwoParams {
    fn default() -> Self {
        Self {
            angles: [PI / 8.0, PI / 6.0, PI / 4.0, PI / 3.0],
        }
    }
}

pub fn example_two(params: &ExampleTwoParams) -> Result<PerturbationProblem> {
    if let Some(t) = params.angles.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter(format!("projection angle {t} is not finite")));
    }
    let [a, b, x, y] = params.angles.map(projection_at_angle);
    PerturbationProblem::new(a, b, x, y)
}

/// Per-trial seed derived from a master seed (splitmix64 finalizer).
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, complex: bool) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
        C64::new(re, im)
    })
}

/// `G G*` with `G` standard normal and `n - rank` randomly chosen columns
/// of `G` zeroed, so the result has rank `rank` almost surely.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize, rank: usize, complex: bool) -> PsdMatrix {
    let mut g = gaussian_matrix(rng, n, n, complex);
    for j in sample(rng, n, n - rank.min(n)) {
        g.column_mut(j).fill(C64::new(0.0, 0.0));
    }
    PsdMatrix::assume_psd(HermitianMatrix::from_hermitian_part(&g * g.adjoint()))
}

/// A rank in `0..=n` when deficiency is allowed, `n` otherwise.
pub fn random_rank<R: Rng>(rng: &mut R, n: usize, allow_rank_deficient: bool) -> usize {
    if allow_rank_deficient {
        rng.random_range(0..=n)
    } else {
        n
    }
}

/// Haar-like random unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize, complex: bool) -> CMatrix {
    gaussian_matrix(rng, n, n, complex).qr().q()
}

fn projector_onto(columns: &CMatrix) -> PsdMatrix {
    if columns.ncols() == 0 {
        return PsdMatrix::zeros(columns.nrows());
    }
    let q = columns.clone().qr().q();
    PsdMatrix::assume_psd(HermitianMatrix::from_hermitian_part(&q * q.adjoint()))
}

/// Random orthogonal projection of the given rank.
pub fn random_projection<R: Rng>(rng: &mut R, n: usize, rank: usize, complex: bool) -> PsdMatrix {
    let u = random_unitary(rng, n, complex);
    projector_onto(&u.columns(0, rank.min(n)).into_owned())
}

/// A pair of orthogonal projections.
///
/// With probability 1/3 (and always for `n = 1`) the pair is diagonal in a
/// common random basis and therefore commutes. Otherwise both ranges contain
/// a shared random subspace and are completed by independent generic
/// directions taken from its orthogonal complement.
pub fn random_projection_pair<R: Rng>(rng: &mut R, n: usize, complex: bool) -> (PsdMatrix, PsdMatrix) {
    let u = random_unitary(rng, n, complex);
    if n == 1 || rng.random_range(0..3) == 0 {
        let pick = |rng: &mut R| -> Vec<usize> { (0..n).filter(|_| rng.random_bool(0.5)).collect() };
        let (ip, iq) = (pick(rng), pick(rng));
        let cols = |idx: &[usize]| CMatrix::from_fn(n, idx.len(), |i, j| u[(i, idx[j])]);
        return (projector_onto(&cols(&ip)), projector_onto(&cols(&iq)));
    }
    // both sides get at least one generic direction, so the pair commutes
    // with probability zero
    let shared = rng.random_range(0..=(n - 2).min(n / 2));
    let free = n - shared;
    let k1 = rng.random_range(1..free);
    let k2 = rng.random_range(1..=free - k1);
    let common = u.columns(0, shared).into_owned();
    let complement = u.columns(shared, free).into_owned();
    let extra = |rng: &mut R, k: usize| &complement * gaussian_matrix(rng, free, k, complex);
    let p_cols = concat_columns(&common, &extra(rng, k1));
    let q_cols = concat_columns(&common, &extra(rng, k2));
    (projector_onto(&p_cols), projector_onto(&q_cols))
}

fn concat_columns(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    CMatrix::from_fn(n, a.ncols() + b.ncols(), |i, j| {
        if j < a.ncols() {
            a[(i, j)]
        } else {
            b[(i, j - a.ncols())]
        }
    })
}

/// Four independent random PSD matrices of dimension `n`.
pub fn random_quadruple<R: Rng>(rng: &mut R, n: usize, allow_rank_deficient: bool, complex: bool) -> PerturbationProblem {
    let next = |rng: &mut R| {
        let rank = random_rank(rng, n, allow_rank_deficient);
        random_psd(rng, n, rank, complex)
    };
    let (a, b, x, y) = (next(rng), next(rng), next(rng), next(rng));
    PerturbationProblem::new(a, b, x, y).expect("generated matrices share a dimension")
}

/// Four random orthogonal projections; `(X, Y)` is drawn as a pair so that
/// nontrivial range intersections occur.
pub fn random_projection_quadruple<R: Rng>(rng: &mut R, n: usize, complex: bool) -> PerturbationProblem {
    let (a, b) = random_projection_pair(rng, n, complex);
    let (x, y) = random_projection_pair(rng, n, complex);
    PerturbationProblem::new(a, b, x, y).expect("generated matrices share a dimension")
}
