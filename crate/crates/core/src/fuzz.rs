//! Randomized property checking over generated PSD quadruples.
//!
//! Every trial draws its own RNG stream from `trial_seed(master, index)`, so
//! trials are independent, can run in parallel, and a failing trial can be
//! replayed from the reported seed alone.

use std::ops::RangeInclusive;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{random_projection_quadruple, random_quadruple, seeded_rng, trial_seed};
use crate::matrix::{HermitianMatrix, PsdMatrix};
use crate::parallel_sum::{parallel_sum, parallel_sum_identity_residuals, parallel_sum_norm_bound};
use crate::perturbation::{
    error_matrix, factorization_residual, h_and_t, lambda_coeff, minimize_f, mu_coeff, parameterized_bound,
    OptimizerConfig, PerturbationProblem,
};
use crate::spectral::{loewner_margin, penrose_residuals, spectral_norm};
use crate::tolerance::ToleranceConfig;
use crate::upper_bounds::{c_bound, join};

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub trials: usize,
    pub dim_range: RangeInclusive<usize>,
    pub seed: u64,
    pub allow_rank_deficient: bool,
    pub complex_entries: bool,
    /// Draw roughly one trial in five as four orthogonal projections.
    pub projection_trials: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            dim_range: 1..=8,
            seed: 42,
            allow_rank_deficient: true,
            complex_entries: true,
            projection_trials: true,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("fuzzing needs at least one trial".into()));
        }
        if *self.dim_range.start() == 0 || self.dim_range.start() > self.dim_range.end() {
            return Err(Error::InvalidParameter(format!(
                "dimension range {}..={} must be positive and ordered",
                self.dim_range.start(),
                self.dim_range.end()
            )));
        }
        Ok(())
    }
}

/// One generated problem and how to reproduce it.
#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub seed: u64,
    pub projections: bool,
    pub problem: PerturbationProblem,
}

impl Trial {
    pub fn generate(cfg: &FuzzConfig, index: usize) -> Self {
        Self::from_seed(cfg, index, trial_seed(cfg.seed, index as u64))
    }

    pub fn from_seed(cfg: &FuzzConfig, index: usize, seed: u64) -> Self {
        let mut rng = seeded_rng(seed);
        let n = rng.random_range(cfg.dim_range.clone());
        let projections = cfg.projection_trials && rng.random_bool(0.2);
        let problem = if projections {
            random_projection_quadruple(&mut rng, n, cfg.complex_entries)
        } else {
            random_quadruple(&mut rng, n, cfg.allow_rank_deficient, cfg.complex_entries)
        };
        Self { index, seed, projections, problem }
    }
}

/// A named property. `run` returns one message per failed assertion; an
/// `Err` from the numerics is also reported as a violation.
#[derive(Clone, Copy)]
pub struct Check {
    pub name: &'static str,
    pub run: fn(&PerturbationProblem, &ToleranceConfig) -> Result<Vec<String>>,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub trial: usize,
    pub seed: u64,
    pub dim: usize,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzReport {
    pub trials: usize,
    pub checks: usize,
    /// Ordered by trial index, then by check order.
    pub violations: Vec<Violation>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// `(trial index, seed)` of every trial with at least one violation.
    pub fn failing_trials(&self) -> Vec<(usize, u64)> {
        let mut out: Vec<(usize, u64)> = self.violations.iter().map(|v| (v.trial, v.seed)).collect();
        out.dedup();
        out
    }
}

struct Failures(Vec<String>);

impl Failures {
    fn new() -> Self {
        Self(Vec::new())
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    /// `a >= b` in the Loewner order at `psd_tol (1 + scale)`.
    fn loewner(&mut self, what: &str, a: &HermitianMatrix, b: &HermitianMatrix, scale: f64, tol: &ToleranceConfig) -> Result<()> {
        let margin = loewner_margin(a, b)?;
        let floor = tol.psd_floor(scale);
        self.expect(margin >= floor, || format!("{what}: min eigenvalue {margin:.3e} < {floor:.3e}"));
        Ok(())
    }

    fn le(&mut self, what: &str, lhs: f64, rhs: f64, slack: f64) {
        self.expect(lhs <= rhs + slack, || format!("{what}: {lhs:.12e} > {rhs:.12e} + {slack:.1e}"));
    }
}

fn check_penrose(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<Vec<String>> {
    let mut f = Failures::new();
    for (name, m) in [("A", p.a()), ("B", p.b()), ("X", p.x()), ("Y", p.y())] {
        let r = penrose_residuals(m, tol)?;
        f.expect(r.within(tol), || {
            format!("{name}: residuals {:?} with ||M|| = {:.3e}, ||M^+|| = {:.3e}", r.residuals, r.norm, r.pinv_norm)
        });
    }
    Ok(f.0)
}

fn check_parallel_sum(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<Vec<String>> {
    let mut f = Failures::new();
    for (name, a, b) in [("A:B", p.a(), p.b()), ("X:Y", p.x(), p.y())] {
        let (na, nb) = (spectral_norm(a)?, spectral_norm(b)?);
        let r = parallel_sum_identity_residuals(a, b, tol)?;
        f.le(&format!("{name} identities"), r.max(), 0.0, tol.residual_tol * (1.0 + na + nb));
        let norm = spectral_norm(parallel_sum(a, b, tol)?.as_hermitian())?;
        f.le(&format!("{name} norm bound"), norm, parallel_sum_norm_bound(a, b)?, tol.psd_tol);
    }
    Ok(f.0)
}

fn check_join_order(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<Vec<String>> {
    let mut f = Failures::new();
    let (x, y) = (p.x(), p.y());
    let w = join(x, y, tol)?;
    let j = w.join.as_hermitian();
    let c = c_bound(x, y, tol)?;
    let scale = spectral_norm(&(x + y))?;
    f.loewner("X∨Y >= X", j, x, scale, tol)?;
    f.loewner("X∨Y >= Y", j, y, scale, tol)?;
    f.loewner("C(X,Y) >= X∨Y", &c, j, scale, tol)?;
    Ok(f.0)
}

fn check_quarter_gap(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<Vec<String>> {
    let mut f = Failures::new();
    let w = join(p.x(), p.y(), tol)?;
    let zero = HermitianMatrix::zeros(p.dim());
    let scale = spectral_norm(&(p.x() + p.y()))?;
    f.loewner("(X+Y)/4 - X:Y >= 0", &w.quarter_gap, &zero, scale, tol)?;
    f.loewner("W >= 0", &w.w, &zero, spectral_norm(&w.w)?, tol)?;
    Ok(f.0)
}

fn check_factorization(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<Vec<String>> {
    let mut f = Failures::new();
    let (h, t) = h_and_t(p, tol)?;
    let allowed = tol.residual_tol * (1.0 + spectral_norm(&h)? + spectral_norm(&t)?);
    f.le("||H - S*TS||", factorization_residual(p, tol)?, 0.0, allowed);
    let zero = HermitianMatrix::zeros(p.dim());
    let scale = spectral_norm(&(p.a() + p.b()))? + spectral_norm(&(p.x() + p.y()))?;
    f.loewner("H >= 0", &h, &zero, scale, tol)?;
    Ok(f.0)
}

fn check_bound_chain(p: &PerturbationProblem, tol: &ToleranceConfig) -> Result<Vec<String>> {
    let mut f = Failures::new();
    let e = spectral_norm(error_matrix(p, tol)?.as_hermitian())?;
    let pb = parameterized_bound(p, 1.0, 1.0, tol)?;
    let lambda = lambda_coeff(p.a(), p.b(), tol)?;
    let mu = mu_coeff(p.a(), p.b(), tol)?;
    let jn = spectral_norm(&join(p.x(), p.y(), tol)?.join)?;
    let sn = spectral_norm(&(p.x() + p.y()))?;
    let f_star = minimize_f(p, &OptimizerConfig::default(), tol)?.value;
    f.le("||E|| <= bound(1,1)", e, pb, tol.psd_tol);
    f.le("bound(1,1) <= mu ||X∨Y||", pb, mu * jn, tol.psd_tol);
    f.le("mu ||X∨Y|| <= lambda ||X∨Y||", mu * jn, lambda * jn, tol.psd_tol);
    f.le("lambda ||X∨Y|| <= lambda ||X+Y||", lambda * jn, lambda * sn, tol.psd_tol);
    f.le("f* <= mu ||X∨Y||", f_star, mu * jn, tol.residual_tol);
    f.le("||E|| <= f*", e, f_star, tol.psd_tol);
    f.le("mu <= lambda", mu, lambda, tol.psd_tol);
    Ok(f.0)
}

/// Checks run by [`run_fuzz`].
pub fn standard_checks() -> Vec<Check> {
    vec![
        Check { name: "penrose", run: check_penrose },
        Check { name: "parallel-sum", run: check_parallel_sum },
        Check { name: "join-order", run: check_join_order },
        Check { name: "quarter-gap", run: check_quarter_gap },
        Check { name: "factorization", run: check_factorization },
        Check { name: "bound-chain", run: check_bound_chain },
    ]
}

pub fn run_fuzz(cfg: &FuzzConfig, tol: &ToleranceConfig) -> Result<FuzzReport> {
    run_fuzz_with(cfg, tol, &standard_checks())
}

pub fn run_fuzz_with(cfg: &FuzzConfig, tol: &ToleranceConfig, checks: &[Check]) -> Result<FuzzReport> {
    cfg.validate()?;
    tol.validate()?;
    let per_trial: Vec<Vec<Violation>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(&Trial::generate(cfg, i), tol, checks))
        .collect();
    Ok(FuzzReport {
        trials: cfg.trials,
        checks: checks.len(),
        violations: per_trial.into_iter().flatten().collect(),
    })
}

pub fn run_trial(trial: &Trial, tol: &ToleranceConfig, checks: &[Check]) -> Vec<Violation> {
    let mut out = Vec::new();
    for check in checks {
        let details = match (check.run)(&trial.problem, tol) {
            Ok(d) => d,
            Err(e) => vec![format!("numerical error: {e}")],
        };
        out.extend(details.into_iter().map(|detail| Violation {
            trial: trial.index,
            seed: trial.seed,
            dim: trial.problem.dim(),
            check: check.name,
            detail,
        }));
    }
    out
}

/// Convenience for building ad hoc checks: `true` iff `a <= b` in the
/// Loewner order at `psd_tol (1 + ||b - a||)`.
pub fn loewner_leq(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<bool> {
    crate::spectral::loewner_geq(b, a, tol)
}
