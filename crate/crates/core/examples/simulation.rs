//! Replicated accuracy study with cross-validated λ, summarised per method.
//! A scaled-down version of the `equal simulate` command.
//!
//!     cargo run --release --example simulation

use equal::experiments::{run_simulation, summarize, CaseKind, Method, SimulationConfig};

fn main() -> equal::Result<()> {
    let mut cfg = SimulationConfig::new(CaseKind::Case1, 100, 150, 4);
    cfg.methods = vec![Method::Equals, Method::Equal, Method::Glasso];
    cfg.grid_size = 12;
    cfg.floor_scale = 0.4;
    cfg.penalize_diagonal = false;

    let rows = run_simulation(&cfg)?;
    println!(
        "{:<7} {:>15} {:>15} {:>15} {:>15} {:>9}",
        "method", "loss1", "loss2", "loss3", "loss4", "min eig"
    );
    for s in summarize(&rows) {
        let fmt = |(m, sd): (f64, f64)| format!("{m:.3} ({sd:.3})");
        println!(
            "{:<7} {:>15} {:>15} {:>15} {:>15} {:>9.3}",
            s.method.name(),
            fmt(s.loss1),
            fmt(s.loss2),
            fmt(s.loss3),
            fmt(s.loss4),
            s.min_eigen_min
        );
    }
    Ok(())
}
