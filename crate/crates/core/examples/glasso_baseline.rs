//! The graphical lasso solved by the same ADMM splitting, for comparison.
//! Its Ω-step needs an eigendecomposition per iteration, O(p³), where the
//! quadratic losses need only matrix products with the thin SVD.
//!
//!     cargo run --release --example glasso_baseline

use std::time::Instant;

use equal::experiments::{gen_case1, losses, sample_gaussian, Estimator, Method};

fn main() -> equal::Result<()> {
    let model = gen_case1(200)?;
    let x = sample_gaussian(&model, 200, 2)?;
    let lambda = 0.15;

    for method in [Method::Glasso, Method::Equals] {
        let start = Instant::now();
        let fit = Estimator::new(method).fit(&x, lambda)?;
        let secs = start.elapsed().as_secs_f64();
        let rep = losses(&model, &fit.estimate)?;
        println!(
            "{method:<7} {:>4} iterations {secs:>6.2}s  loss1 {:.3}  min eigenvalue {:.3}",
            fit.iterations, rep.loss1, rep.min_eigen
        );
    }
    Ok(())
}
