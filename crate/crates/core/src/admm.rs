//! ADMM for `min L(Ω) + λ‖W ∘ Ω‖₁` with a quadratic loss.
//!
//! The splitting is `Ω = A` with scaled dual `B`:
//!
//! ```text
//! C     = I + ρ(A − B)
//! Ω     = ridge solve of L′(Ω) + ρΩ = C      (closed form, see `ridge`)
//! A     = soft(Ω + B, λW/ρ)
//! B     = B + Ω − A
//! ```
//!
//! starting from `A = B = I`. The returned estimate is `A` for the
//! symmetric loss and the min-magnitude symmetrisation of `A` for `L₁`.

use ndarray::{Array2, Zip};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{min_abs_symmetrize, soft, Gram, ThinSvd};
use crate::penalty::PenaltySpec;
use crate::ridge::{
    build_spectrum, is_exactly_symmetric, solve_l1_into, solve_l2_general, solve_l2_symmetric_into,
    RidgeSpectrum, RidgeWork,
};

/// Entries with magnitude above this count as non-zero in sparsity reports.
pub const NONZERO_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Loss {
    /// `½tr(ΩᵀSΩ) − tr(Ω)`: the EQUAL estimator.
    L1,
    /// `¼tr(ΩSΩᵀ) + ¼tr(ΩᵀSΩ) − tr(Ω)`: the EQUALs (D-trace) estimator.
    L2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmmConfig {
    pub loss: Loss,
    pub rho: f64,
    pub max_iter: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            loss: Loss::L1,
            rho: 1.0,
            max_iter: 1000,
            tol_abs: 1e-6,
            tol_rel: 1e-4,
        }
    }
}

impl AdmmConfig {
    pub fn with_loss(mut self, loss: Loss) -> Self {
        self.loss = loss;
        self
    }

    pub fn with_tolerances(mut self, tol_abs: f64, tol_rel: f64) -> Self {
        self.tol_abs = tol_abs;
        self.tol_rel = tol_rel;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::invalid(format!(
                "rho must be positive, got {}",
                self.rho
            )));
        }
        if !(self.tol_abs > 0.0 && self.tol_rel > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// Iterates of the ADMM loop. Reusing a state across calls warm-starts the
/// next solve from its `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub omega: Array2<f64>,
    pub a: Array2<f64>,
    pub b: Array2<f64>,
    pub k: usize,
    pub primal_res: f64,
    pub dual_res: f64,
}

impl AdmmState {
    /// `A⁰ = B⁰ = I`.
    pub fn identity(p: usize) -> Self {
        Self {
            omega: Array2::eye(p),
            a: Array2::eye(p),
            b: Array2::eye(p),
            k: 0,
            primal_res: 0.0,
            dual_res: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Symmetric estimate of the precision matrix.
    pub estimate: Array2<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Penalised objective at the final `A` iterate, i.e. before the `L₁`
    /// output symmetrisation.
    pub objective: f64,
    /// KKT violation at the final `A` iterate.
    pub kkt_residual: f64,
}

/// Primal/dual residual test shared with the glasso baseline.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StoppingRule {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub rho: f64,
}

impl StoppingRule {
    pub fn new(cfg: &AdmmConfig) -> Self {
        Self {
            tol_abs: cfg.tol_abs,
            tol_rel: cfg.tol_rel,
            rho: cfg.rho,
        }
    }

    /// Returns `(‖Ω − A‖₂, ρ‖A − A_prev‖₂, converged)`; errors on
    /// non-finite iterates.
    pub fn check(
        &self,
        omega: &Array2<f64>,
        a: &Array2<f64>,
        a_prev: &Array2<f64>,
        b: &Array2<f64>,
    ) -> Result<(f64, f64, bool)> {
        let mut sums = [0.0f64; 5];
        Zip::from(omega)
            .and(a)
            .and(a_prev)
            .and(b)
            .for_each(|&o, &a, &ap, &b| {
                sums[0] += (o - a) * (o - a);
                sums[1] += (a - ap) * (a - ap);
                sums[2] += o * o;
                sums[3] += a * a;
                sums[4] += b * b;
            });
        self.decide(sums, omega.nrows())
    }

    /// The rule applied to precomputed squared norms
    /// `[‖Ω−A‖², ‖A−A_prev‖², ‖Ω‖², ‖A‖², ‖B‖²]`.
    pub fn decide(&self, sums: [f64; 5], p: usize) -> Result<(f64, f64, bool)> {
        if sums.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical("ADMM iterate became non-finite"));
        }
        let [r2, s2, o2, a2, b2] = sums.map(f64::sqrt);
        let primal = r2;
        let dual = self.rho * s2;
        let p = p as f64;
        let eps_pri = self.tol_abs * p + self.tol_rel * o2.max(a2);
        let eps_dual = self.tol_abs * p + self.tol_rel * self.rho * b2;
        Ok((primal, dual, primal <= eps_pri && dual <= eps_dual))
    }
}

/// A solver bound to one factorisation and step size. The spectrum is
/// λ-independent, so one `Admm` serves a whole path.
#[derive(Debug, Clone)]
pub struct Admm<'a> {
    svd: &'a ThinSvd,
    spectrum: RidgeSpectrum,
    cfg: AdmmConfig,
}

impl<'a> Admm<'a> {
    pub fn new(svd: &'a ThinSvd, cfg: &AdmmConfig) -> Result<Self> {
        cfg.validate()?;
        let spectrum = build_spectrum(svd, cfg.rho)?;
        Ok(Self {
            svd,
            spectrum,
            cfg: cfg.clone(),
        })
    }

    pub fn config(&self) -> &AdmmConfig {
        &self.cfg
    }

    pub fn spectrum(&self) -> &RidgeSpectrum {
        &self.spectrum
    }

    /// Run from `state` until convergence or `max_iter`, leaving the final
    /// iterates in `state`.
    pub fn run(&self, penalty: &PenaltySpec, state: &mut AdmmState) -> Result<FitResult> {
        let p = self.svd.dim();
        penalty.validate(p)?;
        if state.a.dim() != (p, p) || state.b.dim() != (p, p) {
            return Err(Error::invalid(format!(
                "warm state has dimension {}, problem has {p}",
                state.dim()
            )));
        }
        for m in [&mut state.a, &mut state.b] {
            if !m.is_standard_layout() {
                *m = m.as_standard_layout().into_owned();
            }
        }
        if state.omega.dim() != (p, p) || !state.omega.is_standard_layout() {
            state.omega = Array2::zeros((p, p));
        }
        let rho = self.cfg.rho;
        let levels = Thresholds::new(penalty, p, rho);
        // Symmetric iterates stay symmetric under the L₂ update, which lets
        // every solve take the cheaper symmetric route.
        let symmetric = self.cfg.loss == Loss::L2
            && levels.is_symmetric()
            && is_exactly_symmetric(&state.a)
            && is_exactly_symmetric(&state.b);
        let rule = StoppingRule::new(&self.cfg);
        let mut work = RidgeWork::new(self.svd);

        let mut c = Array2::<f64>::zeros((p, p));
        Zip::from(&mut c)
            .and(&state.a)
            .and(&state.b)
            .for_each(|c, &a, &b| *c = rho * (a - b));
        c.diag_mut().mapv_inplace(|v| v + 1.0);

        let mut converged = false;
        let mut iterations = 0;
        for _ in 0..self.cfg.max_iter {
            match self.cfg.loss {
                Loss::L1 => {
                    solve_l1_into(&self.spectrum, self.svd, &c, &mut work, &mut state.omega)
                }
                Loss::L2 if symmetric => solve_l2_symmetric_into(
                    &self.spectrum,
                    self.svd,
                    &c,
                    &mut work,
                    &mut state.omega,
                ),
                Loss::L2 => state.omega = solve_l2_general(&self.spectrum, self.svd, &c),
            }
            let sums = fused_update(
                &state.omega,
                &mut state.a,
                &mut state.b,
                &mut c,
                &levels,
                rho,
            );
            state.k += 1;
            iterations += 1;
            let (primal, dual, done) = rule.decide(sums, p)?;
            state.primal_res = primal;
            state.dual_res = dual;
            if done {
                converged = true;
                break;
            }
        }

        let raw = &state.a;
        let estimate = match self.cfg.loss {
            Loss::L1 => min_abs_symmetrize(raw),
            Loss::L2 => raw.clone(),
        };
        Ok(FitResult {
            estimate,
            iterations,
            converged,
            objective: objective(raw, self.svd, penalty, self.cfg.loss),
            kkt_residual: kkt_residual(raw, self.svd, penalty, self.cfg.loss),
        })
    }
}

/// Soft-threshold levels `λW_ij/ρ`, kept as two scalars when unweighted.
enum Thresholds {
    Uniform { off: f64, diag: f64 },
    Matrix(Array2<f64>),
}

impl Thresholds {
    fn new(penalty: &PenaltySpec, p: usize, rho: f64) -> Self {
        match penalty.weights {
            None => Thresholds::Uniform {
                off: penalty.lambda / rho,
                diag: if penalty.penalize_diagonal {
                    penalty.lambda / rho
                } else {
                    0.0
                },
            },
            Some(_) => {
                let mut t = penalty.levels(p);
                t /= rho;
                Thresholds::Matrix(t.as_standard_layout().into_owned())
            }
        }
    }

    fn is_symmetric(&self) -> bool {
        match self {
            Thresholds::Uniform { .. } => true,
            Thresholds::Matrix(t) => is_exactly_symmetric(t),
        }
    }
}

/// One pass over the p² entries: A- and B-updates, the next `C`, and the
/// five squared norms the stopping rule needs
/// (`‖Ω−A‖², ‖A−A_prev‖², ‖Ω‖², ‖A‖², ‖B‖²`).
fn fused_update(
    omega: &Array2<f64>,
    a: &mut Array2<f64>,
    b: &mut Array2<f64>,
    c: &mut Array2<f64>,
    levels: &Thresholds,
    rho: f64,
) -> [f64; 5] {
    let p = omega.nrows();
    let os = omega.as_slice().expect("standard layout");
    let as_ = a.as_slice_mut().expect("standard layout");
    let bs = b.as_slice_mut().expect("standard layout");
    let cs = c.as_slice_mut().expect("standard layout");
    let mut sums = [0.0f64; 5];
    for i in 0..p {
        let row = i * p..(i + 1) * p;
        let (o_row, a_row, b_row, c_row) = (
            &os[row.clone()],
            &mut as_[row.clone()],
            &mut bs[row.clone()],
            &mut cs[row.clone()],
        );
        let t_row = match levels {
            Thresholds::Matrix(t) => Some(&t.as_slice().expect("standard layout")[row]),
            Thresholds::Uniform { .. } => None,
        };
        for j in 0..p {
            let t = match (levels, t_row) {
                (Thresholds::Uniform { diag, .. }, _) if i == j => *diag,
                (Thresholds::Uniform { off, .. }, _) => *off,
                (_, Some(tr)) => tr[j],
                _ => unreachable!(),
            };
            let o = o_row[j];
            let a_old = a_row[j];
            let b_old = b_row[j];
            let a_new = soft(o + b_old, t);
            let b_new = b_old + o - a_new;
            a_row[j] = a_new;
            b_row[j] = b_new;
            c_row[j] = rho * (a_new - b_new) + if i == j { 1.0 } else { 0.0 };
            sums[0] += (o - a_new) * (o - a_new);
            sums[1] += (a_new - a_old) * (a_new - a_old);
            sums[2] += o * o;
            sums[3] += a_new * a_new;
            sums[4] += b_new * b_new;
        }
    }
    sums
}

/// Fit one penalty level. `warm` supplies starting `(A, B)`; otherwise the
/// loop starts from `A = B = I`.
pub fn fit(
    svd: &ThinSvd,
    penalty: &PenaltySpec,
    cfg: &AdmmConfig,
    warm: Option<AdmmState>,
) -> Result<FitResult> {
    let solver = Admm::new(svd, cfg)?;
    let mut state = warm.unwrap_or_else(|| AdmmState::identity(svd.dim()));
    solver.run(penalty, &mut state)
}

fn trace(m: &Array2<f64>) -> f64 {
    m.diag().sum()
}

/// Penalised objective `L(Ω) + Σ λW_ij|Ω_ij|`.
pub fn objective<G: Gram + ?Sized>(
    omega: &Array2<f64>,
    gram: &G,
    penalty: &PenaltySpec,
    loss: Loss,
) -> f64 {
    let smooth = match loss {
        Loss::L1 => 0.5 * gram.quadratic_trace(omega.view()) - trace(omega),
        Loss::L2 => {
            0.25 * gram.quadratic_trace(omega.t()) + 0.25 * gram.quadratic_trace(omega.view())
                - trace(omega)
        }
    };
    smooth + penalty.value(omega)
}

/// Gradient of the smooth loss: `SΩ − I` or `½(SΩ + ΩS) − I`.
pub fn loss_gradient<G: Gram + ?Sized>(omega: &Array2<f64>, gram: &G, loss: Loss) -> Array2<f64> {
    let mut g = gram.apply(omega.view());
    if loss == Loss::L2 {
        // ΩS = (SΩᵀ)ᵀ
        let right = gram.apply(omega.t());
        g += &right.t();
        g *= 0.5;
    }
    g.diag_mut().mapv_inplace(|v| v - 1.0);
    g
}

/// Largest violation of the subgradient optimality conditions.
pub fn kkt_residual<G: Gram + ?Sized>(
    omega: &Array2<f64>,
    gram: &G,
    penalty: &PenaltySpec,
    loss: Loss,
) -> f64 {
    let g = loss_gradient(omega, gram, loss);
    let mut worst = 0.0f64;
    for ((i, j), &o) in omega.indexed_iter() {
        let level = penalty.lambda * penalty.weight(i, j);
        let gij = g[[i, j]];
        let v = if o != 0.0 {
            (gij + level * o.signum()).abs()
        } else {
            (gij.abs() - level).max(0.0)
        };
        worst = worst.max(v);
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpacing {
    #[default]
    Log,
    Linear,
}

/// `count` values from `λ_max = max|S_ij|` down to `λ_max·√(ln p / n)`,
/// log-spaced.
pub fn lambda_grid(s: &Array2<f64>, n: usize, count: usize) -> Result<Vec<f64>> {
    lambda_grid_with(s, n, count, GridSpacing::Log)
}

pub fn lambda_grid_with(
    s: &Array2<f64>,
    n: usize,
    count: usize,
    spacing: GridSpacing,
) -> Result<Vec<f64>> {
    lambda_grid_scaled(s, n, count, spacing, 1.0)
}

/// As [`lambda_grid_with`] with the floor moved to
/// `floor_scale·λ_max·√(ln p / n)`.
pub fn lambda_grid_scaled(
    s: &Array2<f64>,
    n: usize,
    count: usize,
    spacing: GridSpacing,
    floor_scale: f64,
) -> Result<Vec<f64>> {
    if !(floor_scale > 0.0 && floor_scale.is_finite()) {
        return Err(Error::invalid(format!(
            "floor scale must be positive, got {floor_scale}"
        )));
    }
    if count < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 values, got {count}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("sample size must be positive"));
    }
    let lambda_max = crate::matrix::max_abs(s);
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::invalid(
            "covariance is identically zero; lambda_max undefined",
        ));
    }
    let p = s.nrows() as f64;
    let ratio = (p.ln() / n as f64).sqrt();
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid(format!(
            "grid floor ratio sqrt(ln p / n) = {ratio:.4} must lie in (0, 1) (p = {p}, n = {n})"
        )));
    }
    let ratio = ratio * floor_scale;
    if ratio >= 1.0 {
        return Err(Error::invalid(format!(
            "scaled grid floor ratio {ratio:.4} must be below 1"
        )));
    }
    let lambda_min = lambda_max * ratio;
    let last = (count - 1) as f64;
    let mut grid: Vec<f64> = (0..count)
        .map(|k| {
            let t = k as f64 / last;
            match spacing {
                GridSpacing::Log => lambda_max * ratio.powf(t),
                GridSpacing::Linear => lambda_max + (lambda_min - lambda_max) * t,
            }
        })
        .collect();
    grid[0] = lambda_max;
    grid[count - 1] = lambda_min;
    Ok(grid)
}

#[derive(Debug, Clone)]
pub struct SolutionPath {
    pub lambdas: Vec<f64>,
    pub fits: Vec<FitResult>,
    /// Average number of non-zero off-diagonal entries per row, per λ.
    pub sparsity: Vec<f64>,
}

/// Average count of off-diagonal entries with `|v| > NONZERO_EPS` per row.
pub fn off_diagonal_sparsity(estimate: &Array2<f64>) -> f64 {
    let p = estimate.nrows();
    let nnz = estimate
        .indexed_iter()
        .filter(|((i, j), v)| i != j && v.abs() > NONZERO_EPS)
        .count();
    nnz as f64 / p as f64
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("empty lambda grid"));
    }
    if grid.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return Err(Error::invalid(
            "lambda values must be finite and non-negative",
        ));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("lambda grid must be strictly descending"));
    }
    Ok(())
}

/// Fit every λ of a descending grid, warm-starting each solve from the
/// previous `(A, B)`.
pub fn solution_path(
    svd: &ThinSvd,
    grid: &[f64],
    template: &PenaltySpec,
    cfg: &AdmmConfig,
) -> Result<SolutionPath> {
    check_grid(grid)?;
    let solver = Admm::new(svd, cfg)?;
    let mut state = AdmmState::identity(svd.dim());
    let mut fits = Vec::with_capacity(grid.len());
    let mut sparsity = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let fit = solver.run(&template.with_lambda(lambda), &mut state)?;
        sparsity.push(off_diagonal_sparsity(&fit.estimate));
        fits.push(fit);
    }
    Ok(SolutionPath {
        lambdas: grid.to_vec(),
        fits,
        sparsity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{asymmetry, max_abs, thin_svd_gram, DataMatrix};
    use ndarray::{array, Array1};

    fn identity_svd(p: usize) -> ThinSvd {
        ThinSvd::from_parts(Array2::eye(p), Array1::ones(p)).unwrap()
    }

    #[test]
    fn unpenalised_identity_covariance_recovers_identity() {
        let svd = identity_svd(4);
        let cfg = AdmmConfig::default().with_loss(Loss::L2);
        let res = fit(&svd, &PenaltySpec::lasso(0.0), &cfg, None).unwrap();
        assert!(res.converged);
        assert!(max_abs(&(&res.estimate - &Array2::<f64>::eye(4))) < 1e-4);
    }

    #[test]
    fn objective_examples() {
        let svd = identity_svd(3);
        let zero = Array2::zeros((3, 3));
        assert_eq!(
            objective(&zero, &svd, &PenaltySpec::lasso(0.7), Loss::L1),
            0.0
        );
        let eye = Array2::<f64>::eye(3);
        let v = objective(&eye, &svd, &PenaltySpec::lasso(0.0), Loss::L1);
        assert!((v + 1.5).abs() < 1e-15);
    }

    #[test]
    fn kkt_examples() {
        let svd = identity_svd(3);
        let eye = Array2::<f64>::eye(3);
        assert!(kkt_residual(&eye, &svd, &PenaltySpec::lasso(0.0), Loss::L1) < 1e-12);
        let zero = Array2::zeros((3, 3));
        assert_eq!(
            kkt_residual(&zero, &svd, &PenaltySpec::lasso(1.0), Loss::L2),
            0.0
        );
        assert!(
            (kkt_residual(&zero, &svd, &PenaltySpec::lasso(0.25), Loss::L1) - 0.75).abs() < 1e-15
        );
    }

    #[test]
    fn grid_endpoints() {
        let s = Array2::<f64>::eye(100) * 0.9;
        let g = lambda_grid(&s, 100, 2).unwrap();
        assert_eq!(g[0], 0.9);
        assert!((g[1] - 0.9 * (100f64.ln() / 100.0).sqrt()).abs() < 1e-15);
        assert!((g[1] - 0.193_136_942_366).abs() < 1e-11);

        let g = lambda_grid(&s, 100, 50).unwrap();
        assert_eq!(g.len(), 50);
        assert!(g.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(g[49], 0.9 * (100f64.ln() / 100.0).sqrt());
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        let s = Array2::<f64>::eye(200);
        assert!(lambda_grid(&s, 5, 10).is_err(), "sqrt(ln 200 / 5) > 1");
        assert!(lambda_grid(&Array2::zeros((5, 5)), 100, 10).is_err());
        assert!(lambda_grid(&Array2::<f64>::eye(5), 100, 1).is_err());
    }

    #[test]
    fn linear_grid() {
        let s = Array2::<f64>::eye(10);
        let g = lambda_grid_with(&s, 100, 3, GridSpacing::Linear).unwrap();
        let lo = (10f64.ln() / 100.0).sqrt();
        assert!((g[1] - 0.5 * (1.0 + lo)).abs() < 1e-15);
    }

    #[test]
    fn single_lambda_path_matches_fit() {
        let x = DataMatrix::new(array![
            [0.3, -1.2, 0.8],
            [1.1, 0.4, -0.6],
            [-0.9, 0.7, 1.5],
            [0.2, 0.1, -0.3]
        ])
        .unwrap();
        let svd = thin_svd_gram(&x, false).unwrap();
        let cfg = AdmmConfig::default().with_loss(Loss::L2);
        let pen = PenaltySpec::lasso(0.1);
        let path = solution_path(&svd, &[0.1], &pen, &cfg).unwrap();
        let single = fit(&svd, &pen, &cfg, None).unwrap();
        assert_eq!(path.fits[0], single);
        assert!(asymmetry(&single.estimate) == 0.0);
    }

    #[test]
    fn path_rejects_unsorted_grid() {
        let svd = identity_svd(2);
        let cfg = AdmmConfig::default();
        assert!(solution_path(&svd, &[0.1, 0.2], &PenaltySpec::lasso(0.0), &cfg).is_err());
        assert!(solution_path(&svd, &[], &PenaltySpec::lasso(0.0), &cfg).is_err());
    }

    #[test]
    fn mismatched_warm_state_is_rejected() {
        let svd = identity_svd(3);
        let res = fit(
            &svd,
            &PenaltySpec::lasso(0.1),
            &AdmmConfig::default(),
            Some(AdmmState::identity(2)),
        );
        assert!(matches!(res, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn max_iter_exhaustion_is_not_an_error() {
        let svd = identity_svd(3);
        let cfg = AdmmConfig::default()
            .with_max_iter(1)
            .with_tolerances(1e-14, 1e-14);
        let res = fit(&svd, &PenaltySpec::lasso(0.3), &cfg, None).unwrap();
        assert_eq!(res.iterations, 1);
        assert!(!res.converged);
    }
}
