use crate::error::{Error, Result};

/// Thresholds used wherever an exact statement about matrices has to be
/// decided in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative cutoff below which an eigenvalue counts as zero when
    /// inverting. `None` selects `n * f64::EPSILON` for an `n x n` matrix.
    pub rank_rel_tol: Option<f64>,
    /// Slack allowed on eigenvalues in positivity and ordering checks,
    /// scaled by `1 + norm`.
    pub psd_tol: f64,
    /// Slack allowed on identity residuals, scaled by `1 + norms involved`.
    pub residual_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: None,
            psd_tol: 1e-9,
            residual_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if let Some(r) = self.rank_rel_tol {
            if !ok(r) {
                return Err(Error::InvalidParameter(format!(
                    "rank tolerance must be positive and finite, got {r}"
                )));
            }
        }
        if !ok(self.psd_tol) {
            return Err(Error::InvalidParameter(format!(
                "psd tolerance must be positive and finite, got {}",
                self.psd_tol
            )));
        }
        if !ok(self.residual_tol) {
            return Err(Error::InvalidParameter(format!(
                "residual tolerance must be positive and finite, got {}",
                self.residual_tol
            )));
        }
        Ok(())
    }

    /// Relative rank cutoff for an `n x n` matrix.
    pub fn rank_cutoff(&self, n: usize) -> f64 {
        self.rank_rel_tol
            .unwrap_or(n.max(1) as f64 * f64::EPSILON)
    }

    /// Lowest eigenvalue still accepted as "non-negative" for a matrix whose
    /// largest eigenvalue magnitude is `scale`.
    pub fn psd_floor(&self, scale: f64) -> f64 {
        -self.psd_tol * (1.0 + scale)
    }
}
