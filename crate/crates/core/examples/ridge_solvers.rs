//! The two ridge-type linear systems at the heart of each ADMM step, solved
//! through the thin SVD of the data in O(p²n) instead of O(p³) or O(p⁶).
//!
//!     cargo run --release --example ridge_solvers

use equal::matrix::{sample_covariance, thin_svd_gram, DataMatrix};
use equal::{build_spectrum, solve_l1, solve_l2};
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> equal::Result<()> {
    let (n, p, rho) = (40, 300, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = Array2::from_shape_simple_fn((n, p), || StandardNormal.sample(&mut rng));
    let c = Array2::from_shape_simple_fn((p, p), || StandardNormal.sample(&mut rng));
    let data = DataMatrix::new(x)?;

    let svd = thin_svd_gram(&data, false)?;
    let spectrum = build_spectrum(&svd, rho)?;
    println!("p = {p}, n = {n}: S has rank {} of {p}", svd.rank_bound());

    let s = sample_covariance(&data, false)?;
    let eye = Array2::<f64>::eye(p);

    // SΩ + ρΩ = C
    let o1 = solve_l1(&spectrum, &svd, &c)?;
    let r1 = s.dot(&o1) + &o1 * rho - &c;
    println!("(S + ρI)Ω = C          max residual {:.2e}", max_abs(&r1));

    // ½(SΩ + ΩS) + ρΩ = C
    let o2 = solve_l2(&spectrum, &svd, &c)?;
    let r2 = (s.dot(&o2) + o2.dot(&s)) * 0.5 + &o2 * rho - &c;
    println!("½(SΩ + ΩS) + ρΩ = C    max residual {:.2e}", max_abs(&r2));

    // a symmetric right-hand side gives a bitwise symmetric solution
    let cs = (&c + &c.t()) * 0.5 + &eye;
    let o3 = solve_l2(&spectrum, &svd, &cs)?;
    println!("symmetric C -> solution symmetric: {}", o3 == o3.t());
    Ok(())
}

fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}
