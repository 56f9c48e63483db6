use serde::{Deserialize, Serialize};

use super::cv::cross_validate;
use super::estimator::{Estimator, Method};
use super::losses::{losses, LossReport};
use super::models::{generate, sample_gaussian, CaseKind};
use super::{derive_seed, mean_sd};
use crate::admm::AdmmConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub case: CaseKind,
    pub p: usize,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub folds: usize,
    pub grid_size: usize,
    /// Multiplier on the grid floor `λ_max·√(ln p / n)`.
    pub floor_scale: f64,
    pub admm: AdmmConfig,
    pub center: bool,
    pub penalize_diagonal: bool,
}

impl SimulationConfig {
    pub fn new(case: CaseKind, p: usize, n: usize, reps: usize) -> Self {
        Self {
            case,
            p,
            n,
            reps,
            seed: 1,
            methods: vec![Method::Equals, Method::Equal],
            folds: 5,
            grid_size: 30,
            floor_scale: 1.0,
            admm: AdmmConfig::default(),
            center: false,
            penalize_diagonal: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("no methods selected"));
        }
        if self.grid_size < 2 {
            return Err(Error::invalid("grid_size must be at least 2"));
        }
        if self.n < self.folds {
            return Err(Error::invalid(format!(
                "n = {} is smaller than folds = {}",
                self.n, self.folds
            )));
        }
        if self.case == CaseKind::Case3 && !self.p.is_multiple_of(5) {
            return Err(Error::invalid("case 3 needs p divisible by 5"));
        }
        self.admm.validate()
    }

    fn estimator(&self, method: Method) -> Estimator {
        Estimator::new(method)
            .with_admm(self.admm.clone())
            .with_center(self.center)
            .with_diagonal(self.penalize_diagonal)
            .with_floor_scale(self.floor_scale)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationRow {
    pub rep: usize,
    pub method: Method,
    pub best_lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(flatten)]
    pub losses: LossReport,
}

/// Replicated accuracy study. Every replication draws a fresh model (case 3
/// weights are redrawn) and data set; all methods share the data, the λ grid
/// and the fold assignment. λ is picked by cross-validation and the estimate
/// is refitted on the full sample along the grid down to that λ.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<Vec<SimulationRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.reps * cfg.methods.len());
    for rep in 0..cfg.reps {
        let r = rep as u64;
        let model = generate(cfg.case, cfg.p, derive_seed(cfg.seed, 1, r))?;
        let x = sample_gaussian(&model, cfg.n, derive_seed(cfg.seed, 2, r))?;
        let fold_seed = derive_seed(cfg.seed, 3, r);
        let grid = cfg.estimator(cfg.methods[0]).grid(&x, cfg.grid_size)?;
        for &method in &cfg.methods {
            let est = cfg.estimator(method);
            let cv = cross_validate(&x, &grid, &est, cfg.folds, fold_seed)?;
            let path = est.path(&x, &grid[..=cv.best_index])?;
            let fit = path.fits.last().expect("non-empty grid prefix");
            rows.push(SimulationRow {
                rep,
                method,
                best_lambda: cv.best_lambda,
                iterations: fit.iterations,
                converged: fit.converged,
                losses: losses(&model, &fit.estimate)?,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub reps: usize,
    pub loss1: (f64, f64),
    pub loss2: (f64, f64),
    /// Mean and sd over replications where it is defined.
    pub loss3: (f64, f64),
    pub loss3_defined: usize,
    pub loss4: (f64, f64),
    pub min_eigen_min: f64,
}

/// Mean and sample standard deviation of each metric, per method, in order
/// of first appearance.
pub fn summarize(rows: &[SimulationRow]) -> Vec<MethodSummary> {
    let mut methods: Vec<Method> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    methods
        .into_iter()
        .map(|m| {
            let sel: Vec<&LossReport> = rows
                .iter()
                .filter(|r| r.method == m)
                .map(|r| &r.losses)
                .collect();
            let col =
                |f: fn(&LossReport) -> f64| mean_sd(&sel.iter().map(|l| f(l)).collect::<Vec<_>>());
            let l3: Vec<f64> = sel.iter().filter_map(|l| l.loss3).collect();
            MethodSummary {
                method: m,
                reps: sel.len(),
                loss1: col(|l| l.loss1),
                loss2: col(|l| l.loss2),
                loss3: mean_sd(&l3),
                loss3_defined: l3.len(),
                loss4: col(|l| l.loss4),
                min_eigen_min: sel
                    .iter()
                    .map(|l| l.min_eigen)
                    .fold(f64::INFINITY, f64::min),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_simulation_runs_and_is_reproducible() {
        let mut cfg = SimulationConfig::new(CaseKind::Case1, 10, 40, 2);
        cfg.grid_size = 5;
        cfg.methods = vec![Method::Equals, Method::Equal, Method::Glasso];
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        assert_eq!(a.len(), 6);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.losses, y.losses);
        }
        let s = summarize(&a);
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|m| m.reps == 2 && m.loss1.0.is_finite()));
    }

    #[test]
    fn validation() {
        let mut cfg = SimulationConfig::new(CaseKind::Case3, 12, 40, 1);
        assert!(cfg.validate().is_err());
        cfg.p = 10;
        assert!(cfg.validate().is_ok());
        cfg.reps = 0;
        assert!(cfg.validate().is_err());
    }
}
