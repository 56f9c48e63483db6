//! Warm-started solution path: sparsity and iteration counts along a
//! log-spaced λ grid from λ_max = max|S_ij| downwards.
//!
//!     cargo run --release --example solution_path

use equal::experiments::{gen_case1, sample_gaussian, Estimator, Method};

fn main() -> equal::Result<()> {
    let model = gen_case1(150)?;
    let x = sample_gaussian(&model, 200, 11)?;
    // λ_max is set by the diagonal of S, well above every off-diagonal
    // entry, so the default floor λ_max·√(ln p / n) is lowered to reach the
    // part of the path where the graph fills in.
    let est = Estimator::new(Method::Equals).with_floor_scale(0.3);
    let grid = est.grid(&x, 15)?;
    let path = est.path(&x, &grid)?;

    println!("{:>10} {:>10} {:>6}", "lambda", "nnz/row", "iters");
    for ((lambda, fit), sparsity) in grid.iter().zip(&path.fits).zip(&path.sparsity) {
        println!("{lambda:>10.4} {sparsity:>10.3} {:>6}", fit.iterations);
    }
    let total: usize = path.fits.iter().map(|f| f.iterations).sum();
    println!("{total} ADMM iterations for the whole path");
    Ok(())
}
