//! Fit both quadratic-loss estimators at a single λ on simulated data and
//! compare them with the truth.
//!
//!     cargo run --release --example estimate

use equal::experiments::{gen_case2, losses, sample_gaussian, Estimator, Method};

fn main() -> equal::Result<()> {
    // tridiagonal precision, p > n
    let model = gen_case2(200)?;
    let x = sample_gaussian(&model, 100, 3)?;

    for method in [Method::Equal, Method::Equals] {
        let est = Estimator::new(method).with_diagonal(false);
        let fit = est.fit(&x, 0.25)?;
        let rep = losses(&model, &fit.estimate)?;
        let nnz = fit
            .estimate
            .indexed_iter()
            .filter(|((i, j), v)| i != j && **v != 0.0)
            .count();
        println!(
            "{method:<7} {:>4} iterations  converged {}  objective {:.4}  KKT {:.1e}",
            fit.iterations, fit.converged, fit.objective, fit.kkt_residual
        );
        println!(
            "        off-diagonal non-zeros {nnz} (truth {})  Frobenius/√p {:.3}  spectral {:.3}  min eigenvalue {:.3}",
            2 * (model.p() - 1),
            rep.loss1,
            rep.loss2,
            rep.min_eigen
        );
    }
    Ok(())
}
