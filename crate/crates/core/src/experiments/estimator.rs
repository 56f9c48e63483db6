use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use serde::{Deserialize, Serialize};

use crate::admm::{
    fit, lambda_grid_scaled, objective, solution_path, AdmmConfig, FitResult, GridSpacing, Loss,
    SolutionPath,
};
use crate::error::Result;
use crate::glasso::{glasso_fit, glasso_path};
use crate::matrix::{sample_covariance, thin_svd_gram, DataMatrix, ScaledData};
use crate::penalty::PenaltySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// ADMM with the asymmetric quadratic loss, symmetrized afterwards.
    Equal,
    /// ADMM with the symmetric quadratic loss.
    Equals,
    /// Graphical lasso by ADMM.
    Glasso,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Equal => "equal",
            Method::Equals => "equals",
            Method::Glasso => "glasso",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

/// A method plus the settings needed to run it from raw data.
#[derive(Debug, Clone)]
pub struct Estimator {
    pub method: Method,
    pub admm: AdmmConfig,
    pub penalize_diagonal: bool,
    pub center: bool,
    /// Multiplier on the default grid floor `λ_max·√(ln p / n)`.
    pub floor_scale: f64,
}

impl Estimator {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            admm: AdmmConfig::default(),
            penalize_diagonal: true,
            center: false,
            floor_scale: 1.0,
        }
    }

    pub fn with_admm(mut self, admm: AdmmConfig) -> Self {
        self.admm = admm;
        self
    }

    pub fn with_center(mut self, center: bool) -> Self {
        self.center = center;
        self
    }

    pub fn with_floor_scale(mut self, floor_scale: f64) -> Self {
        self.floor_scale = floor_scale;
        self
    }

    pub fn with_diagonal(mut self, penalize: bool) -> Self {
        self.penalize_diagonal = penalize;
        self
    }

    /// The ADMM settings with the loss fixed by the method.
    pub fn config(&self) -> AdmmConfig {
        let loss = match self.method {
            Method::Equals => Loss::L2,
            _ => Loss::L1,
        };
        self.admm.clone().with_loss(loss)
    }

    pub fn template(&self) -> PenaltySpec {
        PenaltySpec::lasso(0.0).with_diagonal(self.penalize_diagonal)
    }

    /// Log-spaced grid for `x` from `λ_max` down to the scaled floor.
    pub fn grid(&self, x: &DataMatrix, count: usize) -> Result<Vec<f64>> {
        let s = sample_covariance(x, self.center)?;
        lambda_grid_scaled(&s, x.n(), count, GridSpacing::Log, self.floor_scale)
    }

    pub fn path(&self, x: &DataMatrix, grid: &[f64]) -> Result<SolutionPath> {
        let cfg = self.config();
        match self.method {
            Method::Glasso => glasso_path(
                &sample_covariance(x, self.center)?,
                grid,
                &self.template(),
                &cfg,
            ),
            _ => solution_path(
                &thin_svd_gram(x, self.center)?,
                grid,
                &self.template(),
                &cfg,
            ),
        }
    }

    pub fn fit(&self, x: &DataMatrix, lambda: f64) -> Result<FitResult> {
        let cfg = self.config();
        let penalty = self.template().with_lambda(lambda);
        match self.method {
            Method::Glasso => glasso_fit(&sample_covariance(x, self.center)?, &penalty, &cfg, None),
            _ => fit(&thin_svd_gram(x, self.center)?, &penalty, &cfg, None),
        }
    }

    /// Unpenalised loss of `estimate` against held-out data: the method's own
    /// quadratic loss, or the Gaussian negative log-likelihood for glasso
    /// (`+∞` if the estimate is not positive definite).
    pub fn heldout_score(&self, estimate: &Array2<f64>, test: &ScaledData) -> Result<f64> {
        let zero = PenaltySpec::lasso(0.0);
        match self.method {
            Method::Equal => Ok(objective(estimate, test, &zero, Loss::L1)),
            Method::Equals => Ok(objective(estimate, test, &zero, Loss::L2)),
            Method::Glasso => {
                let vals = estimate.eigvalsh(UPLO::Lower)?;
                if vals.iter().any(|v| *v <= 0.0) {
                    return Ok(f64::INFINITY);
                }
                Ok(test.trace_product(estimate) - vals.iter().map(|v| v.ln()).sum::<f64>())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loss_follows_method() {
        assert_eq!(Estimator::new(Method::Equals).config().loss, Loss::L2);
        assert_eq!(Estimator::new(Method::Equal).config().loss, Loss::L1);
        let e = Estimator::new(Method::Equals).with_admm(AdmmConfig::default().with_loss(Loss::L1));
        assert_eq!(e.config().loss, Loss::L2);
    }

    #[test]
    fn heldout_identity() {
        let x = DataMatrix::new(Array2::eye(3) * 3f64.sqrt()).unwrap();
        let test = ScaledData::new(&x, None);
        let eye = Array2::<f64>::eye(3);
        // S = I: quadratic losses give p/2 − p, likelihood gives p.
        assert!(
            (Estimator::new(Method::Equal)
                .heldout_score(&eye, &test)
                .unwrap()
                + 1.5)
                .abs()
                < 1e-12
        );
        assert!(
            (Estimator::new(Method::Equals)
                .heldout_score(&eye, &test)
                .unwrap()
                + 1.5)
                .abs()
                < 1e-12
        );
        assert!(
            (Estimator::new(Method::Glasso)
                .heldout_score(&eye, &test)
                .unwrap()
                - 3.0)
                .abs()
                < 1e-12
        );
        let neg = -&eye;
        assert!(Estimator::new(Method::Glasso)
            .heldout_score(&neg, &test)
            .unwrap()
            .is_infinite());
    }
}
