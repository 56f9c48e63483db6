use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::estimator::{Estimator, Method};
use super::models::{generate, sample_gaussian, CaseKind};
use super::{derive_seed, mean_sd};
use crate::admm::AdmmConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub case: CaseKind,
    pub p_list: Vec<usize>,
    pub n: usize,
    pub grid_size: usize,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub seed: u64,
    pub admm: AdmmConfig,
    /// Run and discard one path per method at the smallest p first.
    pub warmup: bool,
}

impl BenchConfig {
    pub fn new(case: CaseKind, p_list: Vec<usize>, n: usize) -> Self {
        Self {
            case,
            p_list,
            n,
            grid_size: 50,
            methods: vec![Method::Equals, Method::Equal, Method::Glasso],
            reps: 3,
            seed: 1,
            admm: AdmmConfig::default(),
            warmup: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_list.is_empty() || self.methods.is_empty() || self.reps == 0 {
            return Err(Error::invalid(
                "bench needs at least one p, one method and one rep",
            ));
        }
        if self.grid_size < 2 {
            return Err(Error::invalid("grid_size must be at least 2"));
        }
        if self.case == CaseKind::Case3 && self.p_list.iter().any(|p| !p.is_multiple_of(5)) {
            return Err(Error::invalid("case 3 needs every p divisible by 5"));
        }
        self.admm.validate()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimingRow {
    pub case: CaseKind,
    pub p: usize,
    pub n: usize,
    pub method: Method,
    pub reps: usize,
    /// Wall-clock seconds for a full solution path, decomposition included.
    pub mean_secs: f64,
    pub sd_secs: f64,
    /// Fastest rep; less sensitive to background load than the mean.
    pub min_secs: f64,
    /// ADMM iterations summed along the path (last rep).
    pub iterations: usize,
}

/// Time full solution paths for every `(p, method)` pair. Each p gets one
/// data set and one grid shared by all methods.
pub fn bench_timing(cfg: &BenchConfig) -> Result<Vec<TimingRow>> {
    cfg.validate()?;
    let mut data = Vec::with_capacity(cfg.p_list.len());
    for (k, &p) in cfg.p_list.iter().enumerate() {
        let k = k as u64;
        let model = generate(cfg.case, p, derive_seed(cfg.seed, 1, k))?;
        let x = sample_gaussian(&model, cfg.n, derive_seed(cfg.seed, 2, k))?;
        let grid = Estimator::new(cfg.methods[0]).grid(&x, cfg.grid_size)?;
        data.push((p, x, grid));
    }
    let estimator = |m: Method| Estimator::new(m).with_admm(cfg.admm.clone());

    if cfg.warmup {
        let (_, x, grid) = data.iter().min_by_key(|d| d.0).expect("non-empty");
        for &m in &cfg.methods {
            estimator(m).path(x, grid)?;
        }
    }

    let mut rows = Vec::new();
    for (p, x, grid) in &data {
        for &m in &cfg.methods {
            let est = estimator(m);
            let mut secs = Vec::with_capacity(cfg.reps);
            let mut iterations = 0;
            for _ in 0..cfg.reps {
                let start = Instant::now();
                let path = est.path(x, grid)?;
                secs.push(start.elapsed().as_secs_f64());
                iterations = path.fits.iter().map(|f| f.iterations).sum();
            }
            let (mean_secs, sd_secs) = mean_sd(&secs);
            let min_secs = secs.iter().copied().fold(f64::INFINITY, f64::min);
            rows.push(TimingRow {
                case: cfg.case,
                p: *p,
                n: cfg.n,
                method: m,
                reps: cfg.reps,
                mean_secs,
                sd_secs,
                min_secs,
                iterations,
            });
        }
    }
    Ok(rows)
}
