//! Graphical-lasso ADMM baseline.
//!
//! Same splitting and stopping rule as [`crate::admm`], but the loss is
//! `tr(SΩ) − log|Ω|`, whose Ω-update `ρΩ − Ω⁻¹ = ρ(A − B) − S` is solved
//! through a full symmetric eigendecomposition. Each iteration therefore
//! costs `Θ(p³)`, which is what the timing comparison measures.

use ndarray::{Array1, Array2, Zip};

use crate::admm::{
    check_grid, off_diagonal_sparsity, AdmmConfig, AdmmState, FitResult, SolutionPath, StoppingRule,
};
use crate::error::{Error, Result};
use crate::matrix::{asymmetry, soft, sym_eigen};
use crate::penalty::PenaltySpec;

/// Symmetric eigendecomposition `M = Q·diag(a)·Qᵀ` (eigenvectors in columns).
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub q: Array2<f64>,
    pub a: Array1<f64>,
}

impl EigDecomp {
    pub fn new(m: &Array2<f64>) -> Result<Self> {
        let (a, q) = sym_eigen(m, true)?;
        Ok(Self {
            q: q.expect("vectors requested"),
            a,
        })
    }

    /// `Q·diag(f(a))·Qᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Array2<f64> {
        let scaled = &self.q * &self.a.mapv(f);
        scaled.dot(&self.q.t())
    }
}

/// Positive root of `ρx − 1/x = a`.
#[inline]
pub fn eigen_map(a: f64, rho: f64) -> f64 {
    (a + (a * a + 4.0 * rho).sqrt()) / (2.0 * rho)
}

/// Solve `ρΩ − Ω⁻¹ = M` for symmetric `M`; the result is positive definite.
pub fn glasso_omega_update(m: &Array2<f64>, rho: f64) -> Result<Array2<f64>> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("rho must be positive, got {rho}")));
    }
    if !m.is_square() {
        return Err(Error::invalid("M must be square"));
    }
    if asymmetry(m) > 1e-8 {
        return Err(Error::invalid("M must be symmetric"));
    }
    let eig = EigDecomp::new(m)?;
    Ok(eig.reconstruct_with(|a| eigen_map(a, rho)))
}

/// `tr(SΩ) − log|Ω| + λ‖W ∘ Ω‖₁`, or `+∞` when `Ω` is not positive definite.
pub fn glasso_objective(
    s: &Array2<f64>,
    omega: &Array2<f64>,
    penalty: &PenaltySpec,
) -> Result<f64> {
    let (vals, _) = sym_eigen(omega, false)?;
    if vals.iter().any(|v| *v <= 0.0) {
        return Ok(f64::INFINITY);
    }
    let logdet: f64 = vals.iter().map(|v| v.ln()).sum();
    Ok((s * omega).sum() - logdet + penalty.value(omega))
}

fn glasso_kkt(s: &Array2<f64>, omega: &Array2<f64>, penalty: &PenaltySpec) -> Result<f64> {
    let eig = EigDecomp::new(omega)?;
    if eig.a.iter().any(|v| *v <= 0.0) {
        return Ok(f64::INFINITY);
    }
    let grad = s - &eig.reconstruct_with(|a| 1.0 / a);
    let mut worst = 0.0f64;
    for ((i, j), &o) in omega.indexed_iter() {
        let level = penalty.lambda * penalty.weight(i, j);
        let g = grad[[i, j]];
        let v = if o != 0.0 {
            (g + level * o.signum()).abs()
        } else {
            (g.abs() - level).max(0.0)
        };
        worst = worst.max(v);
    }
    Ok(worst)
}

fn run(
    s: &Array2<f64>,
    penalty: &PenaltySpec,
    cfg: &AdmmConfig,
    state: &mut AdmmState,
) -> Result<FitResult> {
    let p = s.nrows();
    penalty.validate(p)?;
    if state.a.dim() != (p, p) {
        return Err(Error::invalid("warm state dimension does not match S"));
    }
    let rho = cfg.rho;
    let mut theta = penalty.levels(p);
    theta /= rho;
    let rule = StoppingRule::new(cfg);
    let mut m = Array2::<f64>::zeros((p, p));
    let mut a_prev = Array2::<f64>::zeros((p, p));
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cfg.max_iter {
        Zip::from(&mut m)
            .and(&state.a)
            .and(&state.b)
            .and(s)
            .for_each(|m, &a, &b, &s| *m = rho * (a - b) - s);
        let omega = EigDecomp::new(&m)?.reconstruct_with(|a| eigen_map(a, rho));
        std::mem::swap(&mut a_prev, &mut state.a);
        Zip::from(&mut state.a)
            .and(&omega)
            .and(&state.b)
            .and(&theta)
            .for_each(|a, &o, &b, &t| *a = soft(o + b, t));
        Zip::from(&mut state.b)
            .and(&omega)
            .and(&state.a)
            .for_each(|b, &o, &a| *b += o - a);
        state.omega = omega;
        state.k += 1;
        iterations += 1;
        let (primal, dual, done) = rule.check(&state.omega, &state.a, &a_prev, &state.b)?;
        state.primal_res = primal;
        state.dual_res = dual;
        if done {
            converged = true;
            break;
        }
    }
    let mut estimate = state.a.clone();
    crate::matrix::symmetrize_in_place(&mut estimate);
    Ok(FitResult {
        objective: glasso_objective(s, &estimate, penalty)?,
        kkt_residual: glasso_kkt(s, &estimate, penalty)?,
        estimate,
        iterations,
        converged,
    })
}

/// Graphical lasso by ADMM, starting from `A = B = I` unless `warm` is given.
/// `cfg.loss` is ignored.
pub fn glasso_fit(
    s: &Array2<f64>,
    penalty: &PenaltySpec,
    cfg: &AdmmConfig,
    warm: Option<AdmmState>,
) -> Result<FitResult> {
    cfg.validate()?;
    if !s.is_square() {
        return Err(Error::invalid("S must be square"));
    }
    let mut state = warm.unwrap_or_else(|| AdmmState::identity(s.nrows()));
    run(s, penalty, cfg, &mut state)
}

/// Warm-started glasso path over a descending grid.
pub fn glasso_path(
    s: &Array2<f64>,
    grid: &[f64],
    template: &PenaltySpec,
    cfg: &AdmmConfig,
) -> Result<SolutionPath> {
    cfg.validate()?;
    check_grid(grid)?;
    let mut state = AdmmState::identity(s.nrows());
    let mut fits = Vec::with_capacity(grid.len());
    let mut sparsity = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let fit = run(s, &template.with_lambda(lambda), cfg, &mut state)?;
        sparsity.push(off_diagonal_sparsity(&fit.estimate));
        fits.push(fit);
    }
    Ok(SolutionPath {
        lambdas: grid.to_vec(),
        fits,
        sparsity,
    })
}
