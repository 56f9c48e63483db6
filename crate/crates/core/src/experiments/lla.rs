use serde::{Deserialize, Serialize};

use super::estimator::Estimator;
use super::losses::losses;
use super::models::{generate, sample_gaussian, CaseKind};
use super::{derive_seed, Method};
use crate::admm::{check_grid, solution_path, AdmmConfig};
use crate::error::{Error, Result};
use crate::matrix::thin_svd_gram;
use crate::penalty::{lla_refit, PenaltyFamily, PenaltySpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LlaStudyConfig {
    pub case: CaseKind,
    pub p: usize,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// `Equal` or `Equals`.
    pub method: Method,
    pub family: PenaltyFamily,
    pub tau: f64,
    /// Explicit grid; by default a log grid from the first replication's data.
    pub grid: Option<Vec<f64>>,
    pub grid_size: usize,
    /// Multiplier on the default grid floor.
    pub floor_scale: f64,
    pub admm: AdmmConfig,
}

impl LlaStudyConfig {
    pub fn new(case: CaseKind, p: usize, n: usize, reps: usize, family: PenaltyFamily) -> Self {
        Self {
            case,
            p,
            n,
            reps,
            seed: 1,
            method: Method::Equals,
            family,
            tau: family.default_tau(),
            grid: None,
            grid_size: 20,
            floor_scale: 1.0,
            admm: AdmmConfig::default(),
        }
    }
}

/// Mean `loss1` along a λ grid for the LASSO path and its one-step refit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LlaCurve {
    pub lambdas: Vec<f64>,
    pub lasso_loss1: Vec<f64>,
    pub refit_loss1: Vec<f64>,
}

impl LlaCurve {
    /// Index of the λ with the smallest mean LASSO `loss1`.
    pub fn lasso_best(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.lasso_loss1.iter().enumerate() {
            if *v < self.lasso_loss1[best] {
                best = i;
            }
        }
        best
    }
}

/// Replicated comparison of LASSO and its LLA refit (SCAD or MCP weights
/// from the LASSO estimate at the same λ). The diagonal is unpenalised in
/// both fits so the two differ only in the off-diagonal weights.
pub fn lla_study(cfg: &LlaStudyConfig) -> Result<LlaCurve> {
    if cfg.reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    if cfg.method == Method::Glasso {
        return Err(Error::invalid(
            "the LLA study runs the quadratic-loss estimators only",
        ));
    }
    let est = Estimator::new(cfg.method)
        .with_admm(cfg.admm.clone())
        .with_diagonal(false)
        .with_floor_scale(cfg.floor_scale);
    let admm = est.config();
    let mut grid = cfg.grid.clone();
    let mut lasso = Vec::new();
    let mut refit = Vec::new();
    for rep in 0..cfg.reps {
        let r = rep as u64;
        let model = generate(cfg.case, cfg.p, derive_seed(cfg.seed, 1, r))?;
        let x = sample_gaussian(&model, cfg.n, derive_seed(cfg.seed, 2, r))?;
        let grid = match &grid {
            Some(g) => g.clone(),
            None => {
                let g = est.grid(&x, cfg.grid_size)?;
                grid = Some(g.clone());
                g
            }
        };
        check_grid(&grid)?;
        if rep == 0 {
            lasso = vec![0.0; grid.len()];
            refit = vec![0.0; grid.len()];
        }
        let svd = thin_svd_gram(&x, false)?;
        let path = solution_path(
            &svd,
            &grid,
            &PenaltySpec::lasso(0.0).with_diagonal(false),
            &admm,
        )?;
        for (k, (fit, &lambda)) in path.fits.iter().zip(&grid).enumerate() {
            let two = lla_refit(&svd, fit, cfg.family, lambda, cfg.tau, &admm)?;
            lasso[k] += losses(&model, &fit.estimate)?.loss1;
            refit[k] += losses(&model, &two.estimate)?.loss1;
        }
    }
    let reps = cfg.reps as f64;
    Ok(LlaCurve {
        lambdas: grid.unwrap_or_default(),
        lasso_loss1: lasso.into_iter().map(|v| v / reps).collect(),
        refit_loss1: refit.into_iter().map(|v| v / reps).collect(),
    })
}
