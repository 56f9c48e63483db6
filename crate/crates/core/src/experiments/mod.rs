//! Simulation harness: precision-matrix models, Gaussian sampling, loss
//! metrics, cross-validation, replicated accuracy studies and timing.

mod bench;
mod cv;
mod estimator;
mod lla;
mod losses;
mod models;
mod simulate;

pub use bench::{bench_timing, BenchConfig, TimingRow};
pub use cv::{cross_validate, fold_partition, CvResult};
pub use estimator::{Estimator, Method};
pub use lla::{lla_study, LlaCurve, LlaStudyConfig};
pub use losses::{losses, LossReport};
pub use models::{gen_case1, gen_case2, gen_case3, sample_gaussian, CaseKind, PrecisionModel};
pub use simulate::{run_simulation, summarize, MethodSummary, SimulationConfig, SimulationRow};

/// Derive an independent seed for `(stream, index)` from a base seed.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    // splitmix64 finaliser over a simple combination
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}
