//! Five-fold cross-validation over a λ grid, then a refit on all rows.
//!
//!     cargo run --release --example cross_validation

use equal::experiments::{cross_validate, gen_case2, losses, sample_gaussian, Estimator, Method};

fn main() -> equal::Result<()> {
    let model = gen_case2(50)?;
    let x = sample_gaussian(&model, 200, 21)?;

    // the default floor over-shrinks at this size, so extend the grid down
    let est = Estimator::new(Method::Equals).with_floor_scale(0.3);
    let grid = est.grid(&x, 20)?;
    let cv = cross_validate(&x, &grid, &est, 5, 1)?;

    let path = est.path(&x, &grid)?;
    println!("{:>9} {:>12} {:>8}", "lambda", "held-out", "loss1");
    for (k, lambda) in grid.iter().enumerate() {
        let mark = if k == cv.best_index { " <- chosen" } else { "" };
        let l1 = losses(&model, &path.fits[k].estimate)?.loss1;
        println!("{lambda:>9.4} {:>12.5} {l1:>8.4}{mark}", cv.cv_curve[k]);
    }
    Ok(())
}
