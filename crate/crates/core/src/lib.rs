//! Sparse precision matrix estimation by ADMM on penalized quadratic losses.
//!
//! The two estimators minimise
//!
//! ```text
//! L(Ω) + λ‖W ∘ Ω‖₁
//! ```
//!
//! where `L` is either the column-wise quadratic loss
//! `L₁(Ω) = ½tr(ΩᵀSΩ) − tr(Ω)` ([`Loss::L1`], "EQUAL") or its symmetrised
//! D-trace form `L₂(Ω) = ¼tr(ΩSΩᵀ) + ¼tr(ΩᵀSΩ) − tr(Ω)` ([`Loss::L2`],
//! "EQUALs"). Every Ω-update of the ADMM loop is a ridge-shifted linear
//! system in `S`, solved in closed form from a thin SVD of the data matrix,
//! so one iteration costs `O(min(n, p)·p²)` and no `p × p` factorisation is
//! ever formed.
//!
//! Module map:
//!
//! * [`matrix`]: sample covariance, thin SVD, soft thresholding, symmetrisation.
//! * [`ridge`]: closed-form solvers for `SΩ + ρΩ = C` and `½SΩ + ½ΩS + ρΩ = C`.
//! * [`admm`]: the fit loop, objectives, KKT diagnostics, λ grids and paths.
//! * [`penalty`]: LASSO / SCAD / MCP and the one-step LLA refit.
//! * [`glasso`]: graphical-lasso ADMM baseline.
//! * [`experiments`]: simulation models, loss metrics, cross-validation, timing.
//! * [`cli`]: the `equal` command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admm;
pub mod cli;
mod error;
pub mod experiments;
pub mod glasso;
pub mod matrix;
pub mod penalty;
pub mod ridge;

pub use admm::{
    fit, kkt_residual, lambda_grid, lambda_grid_scaled, lambda_grid_with, objective, solution_path,
    AdmmConfig, AdmmState, FitResult, GridSpacing, Loss, SolutionPath,
};
pub use error::{Error, Result};
pub use matrix::{sample_covariance, thin_svd_gram, DataMatrix, ThinSvd};
pub use penalty::{PenaltyFamily, PenaltySpec};
pub use ridge::{build_spectrum, solve_l1, solve_l2, RidgeSpectrum};
