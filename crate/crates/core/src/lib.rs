//! Parallel sums of Hermitian positive semi-definite matrices, common upper
//! bounds in the Loewner order, and norm bounds for the change of a parallel
//! sum under PSD perturbations.

pub mod eigen;
pub mod error;
pub mod fuzz;
pub mod generators;
pub mod matrix;
pub mod parallel_sum;
pub mod perturbation;
pub mod spectral;
pub mod tolerance;
pub mod upper_bounds;

pub use eigen::{eig_hermitian, EigenDecomposition};
pub use error::{Error, Result};
pub use fuzz::{run_fuzz, FuzzConfig, FuzzReport};
pub use matrix::{operator_norm, CMatrix, HermitianMatrix, PsdMatrix, C64};
pub use parallel_sum::{
    parallel_sum, parallel_sum_identity_residuals, parallel_sum_norm_bound, range_intersection_projector,
    IdentityResiduals,
};
pub use perturbation::{bound_report, f_eval, minimize_f, BoundReport, FMinimum, OptimizerConfig, PerturbationProblem};
pub use spectral::{loewner_geq, numerical_rank, penrose_residuals, PenroseResiduals, pinv_psd, psd_sqrt, range_contained, spectral_norm};
pub use tolerance::ToleranceConfig;
pub use upper_bounds::{c_bound, join, join_commuting, join_projections, join_scaled, JoinWitness};
