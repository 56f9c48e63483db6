//! Path timings across dimensions. The quadratic-loss estimators scale like
//! p² per iteration at fixed n; the graphical lasso like p³.
//!
//!     cargo run --release --example bench

use equal::experiments::{bench_timing, BenchConfig, CaseKind};

fn main() -> equal::Result<()> {
    let mut cfg = BenchConfig::new(CaseKind::Case1, vec![100, 200, 400], 200);
    cfg.reps = 2;
    cfg.grid_size = 20;

    let rows = bench_timing(&cfg)?;
    println!(
        "{:<7} {:>5} {:>10} {:>8} {:>7}",
        "method", "p", "seconds", "sd", "iters"
    );
    for r in &rows {
        println!(
            "{:<7} {:>5} {:>10.3} {:>8.3} {:>7}",
            r.method.name(),
            r.p,
            r.mean_secs,
            r.sd_secs,
            r.iterations
        );
    }
    Ok(())
}
