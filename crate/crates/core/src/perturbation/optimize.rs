use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

use super::objective::Objective;
use super::PerturbationProblem;

/// Search settings for `inf_{t>0} f(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Lower end of the search window in `ln t`.
    pub log_t_min: f64,
    /// Upper end of the search window in `ln t`.
    pub log_t_max: f64,
    /// Number of uniformly spaced `ln t` samples in the coarse scan.
    pub coarse_points: usize,
    /// Golden-section refinement stops once the bracket is this narrow in `t`.
    pub refine_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let span = 1e4f64.ln();
        Self {
            log_t_min: -span,
            log_t_max: span,
            coarse_points: 256,
            refine_tol: 1e-6,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.log_t_min.is_finite() && self.log_t_max.is_finite() && self.log_t_min < self.log_t_max) {
            return Err(Error::InvalidParameter(format!(
                "search window [{}, {}] in ln t is empty or not finite",
                self.log_t_min, self.log_t_max
            )));
        }
        if self.coarse_points < 3 {
            return Err(Error::InvalidParameter(format!(
                "coarse scan needs at least 3 points, got {}",
                self.coarse_points
            )));
        }
        if !(self.refine_tol.is_finite() && self.refine_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "refinement tolerance must be positive, got {}",
                self.refine_tol
            )));
        }
        Ok(())
    }

    /// The coarse grid in `ln t`, both ends included.
    pub fn log_grid(&self) -> Vec<f64> {
        let m = self.coarse_points;
        let step = (self.log_t_max - self.log_t_min) / (m - 1) as f64;
        (0..m)
            .map(|i| if i == m - 1 { self.log_t_max } else { self.log_t_min + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FMinimum {
    pub t: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Stops when `done(lo, hi)` holds for the current bracket, or after 500
/// iterations. Returns the best point evaluated.
pub fn golden_section_min<F>(mut f: F, mut lo: f64, mut hi: f64, done: impl Fn(f64, f64) -> bool) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..500 {
        if done(lo, hi) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Approximates `inf_{t>0} f(t)`.
///
/// The coarse `ln t` grid is evaluated first, then the bracket around the
/// best grid point is refined by golden-section search. `t = 1` is also
/// evaluated when it lies in the window, so the result never exceeds the
/// `mu` bound `f(1)`.
pub fn minimize_f(p: &PerturbationProblem, cfg: &OptimizerConfig, tol: &ToleranceConfig) -> Result<FMinimum> {
    cfg.validate()?;
    let objective = Objective::new(p, tol)?;
    let grid = cfg.log_grid();
    let values = grid
        .par_iter()
        .map(|&s| objective.eval(s.exp()))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NumericalBreakdown(format!(
            "f is not finite at t = {:e}",
            grid[i].exp()
        )));
    }

    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, v)| if *v < values[b] { i } else { b });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (s_ref, f_ref) = golden_section_min(
        |s| objective.eval(s.exp()),
        lo,
        hi,
        |a, b| b.exp() - a.exp() <= cfg.refine_tol,
    )?;

    let mut candidates = vec![(grid[best].exp(), values[best]), (s_ref.exp(), f_ref)];
    if cfg.log_t_min <= 0.0 && 0.0 <= cfg.log_t_max {
        candidates.push((1.0, objective.eval(1.0)?));
    }
    let (t, value) = candidates
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
    if !value.is_finite() {
        return Err(Error::NumericalBreakdown("f is not finite at the refined minimum".into()));
    }
    Ok(FMinimum { t, value })
}
