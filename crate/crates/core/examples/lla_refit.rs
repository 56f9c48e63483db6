//! One-step SCAD and MCP refits from a LASSO fit (local linear
//! approximation): entries the LASSO found large get a smaller weight, so
//! they are shrunk less in the second fit.
//!
//!     cargo run --release --example lla_refit

use equal::experiments::{gen_case1, losses, sample_gaussian};
use equal::penalty::lla_refit;
use equal::{fit, thin_svd_gram, AdmmConfig, Loss, PenaltyFamily, PenaltySpec};

fn main() -> equal::Result<()> {
    let model = gen_case1(100)?;
    let x = sample_gaussian(&model, 100, 5)?;
    let svd = thin_svd_gram(&x, false)?;
    let cfg = AdmmConfig::default().with_loss(Loss::L2);

    println!("{:>7} {:>8} {:>8} {:>8}", "lambda", "LASSO", "SCAD", "MCP");
    for lambda in [0.30, 0.22, 0.16, 0.14] {
        let lasso = fit(
            &svd,
            &PenaltySpec::lasso(lambda).with_diagonal(false),
            &cfg,
            None,
        )?;
        let mut row = vec![losses(&model, &lasso.estimate)?.loss1];
        for family in [PenaltyFamily::Scad, PenaltyFamily::Mcp] {
            let refit = lla_refit(&svd, &lasso, family, lambda, family.default_tau(), &cfg)?;
            row.push(losses(&model, &refit.estimate)?.loss1);
        }
        println!(
            "{lambda:>7.2} {:>8.4} {:>8.4} {:>8.4}",
            row[0], row[1], row[2]
        );
    }
    println!("(Frobenius error / √p against the true precision matrix)");
    Ok(())
}
