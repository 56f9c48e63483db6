//! Penalty families and the one-step local linear approximation (LLA).
//!
//! SCAD and MCP are handled the way the ADMM loop sees every penalty: as a
//! weighted ℓ₁ term `λ Σ W_ij |Ω_ij|`. The LLA step linearises the
//! nonconvex penalty at an initial LASSO estimate, which turns it into such
//! a weight matrix.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::admm::{fit, AdmmConfig, FitResult};
use crate::error::{Error, Result};
use crate::matrix::ThinSvd;

pub const SCAD_DEFAULT_TAU: f64 = 3.7;
pub const MCP_DEFAULT_TAU: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyFamily {
    Lasso,
    Scad,
    Mcp,
}

impl PenaltyFamily {
    pub fn default_tau(self) -> f64 {
        match self {
            PenaltyFamily::Lasso => 0.0,
            PenaltyFamily::Scad => SCAD_DEFAULT_TAU,
            PenaltyFamily::Mcp => MCP_DEFAULT_TAU,
        }
    }
}

/// A penalty `λ Σ W_ij |Ω_ij|` together with the family it came from.
///
/// `fit` only reads `lambda`, `weights` and `penalize_diagonal`; `family`
/// and `tau` matter when it drives an LLA refit.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltySpec {
    pub family: PenaltyFamily,
    pub lambda: f64,
    pub tau: f64,
    pub weights: Option<Array2<f64>>,
    pub penalize_diagonal: bool,
}

impl PenaltySpec {
    pub fn lasso(lambda: f64) -> Self {
        Self::new(PenaltyFamily::Lasso, lambda)
    }

    pub fn scad(lambda: f64) -> Self {
        Self::new(PenaltyFamily::Scad, lambda)
    }

    pub fn mcp(lambda: f64) -> Self {
        Self::new(PenaltyFamily::Mcp, lambda)
    }

    pub fn new(family: PenaltyFamily, lambda: f64) -> Self {
        Self {
            family,
            lambda,
            tau: family.default_tau(),
            weights: None,
            penalize_diagonal: true,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_weights(mut self, weights: Array2<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn with_diagonal(mut self, penalize: bool) -> Self {
        self.penalize_diagonal = penalize;
        self
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self {
            lambda,
            ..self.clone()
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        match self.family {
            PenaltyFamily::Scad if !(self.tau > 2.0) => {
                return Err(Error::invalid(format!(
                    "SCAD needs tau > 2, got {}",
                    self.tau
                )))
            }
            PenaltyFamily::Mcp if !(self.tau > 1.0) => {
                return Err(Error::invalid(format!(
                    "MCP needs tau > 1, got {}",
                    self.tau
                )))
            }
            _ => {}
        }
        if let Some(w) = &self.weights {
            if w.dim() != (p, p) {
                return Err(Error::invalid(format!(
                    "weights are {:?}, expected ({p}, {p})",
                    w.dim()
                )));
            }
            if w.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(Error::invalid("weights must be finite and non-negative"));
            }
        }
        Ok(())
    }

    /// Effective weight of entry `(i, j)`.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j && !self.penalize_diagonal {
            return 0.0;
        }
        self.weights.as_ref().map_or(1.0, |w| w[[i, j]])
    }

    /// `λ·W_ij` for every entry.
    pub fn levels(&self, p: usize) -> Array2<f64> {
        Array2::from_shape_fn((p, p), |(i, j)| self.lambda * self.weight(i, j))
    }

    /// `Σ λ·W_ij·|Ω_ij|`.
    pub fn value(&self, omega: &Array2<f64>) -> f64 {
        omega
            .indexed_iter()
            .map(|((i, j), v)| self.weight(i, j) * v.abs())
            .sum::<f64>()
            * self.lambda
    }
}

/// SCAD penalty value `p_λ(x)`.
pub fn scad_penalty(x: f64, lambda: f64, tau: f64) -> f64 {
    let a = x.abs();
    if a <= lambda {
        lambda * a
    } else if a <= tau * lambda {
        (tau * lambda * a - 0.5 * (a * a + lambda * lambda)) / (tau - 1.0)
    } else {
        0.5 * lambda * lambda * (tau + 1.0)
    }
}

/// MCP penalty value `p_λ(x)`.
pub fn mcp_penalty(x: f64, lambda: f64, tau: f64) -> f64 {
    let a = x.abs();
    if a <= tau * lambda {
        lambda * a - a * a / (2.0 * tau)
    } else {
        0.5 * lambda * lambda * tau
    }
}

/// Derivative of the SCAD penalty with respect to `|x|`.
pub fn scad_derivative(x: f64, lambda: f64, tau: f64) -> f64 {
    let a = x.abs();
    if a <= lambda {
        lambda
    } else if a <= tau * lambda {
        (tau * lambda - a) / (tau - 1.0)
    } else {
        0.0
    }
}

/// Derivative of the MCP penalty with respect to `|x|`.
pub fn mcp_derivative(x: f64, lambda: f64, tau: f64) -> f64 {
    let a = x.abs();
    if a <= tau * lambda {
        (lambda - a / tau).max(0.0)
    } else {
        0.0
    }
}

pub fn penalty_derivative(family: PenaltyFamily, x: f64, lambda: f64, tau: f64) -> f64 {
    match family {
        PenaltyFamily::Lasso => lambda,
        PenaltyFamily::Scad => scad_derivative(x, lambda, tau),
        PenaltyFamily::Mcp => mcp_derivative(x, lambda, tau),
    }
}

/// LLA weights `W_ij = p′_λ(Ω⁰_ij)/λ` off the diagonal, `W_ii = 0`.
///
/// With these weights the thresholding level `λ·W_ij` equals the linearised
/// penalty slope `p′_λ(Ω⁰_ij)` exactly.
pub fn lla_weights(
    initial: &Array2<f64>,
    family: PenaltyFamily,
    lambda: f64,
    tau: f64,
) -> Result<Array2<f64>> {
    if !initial.is_square() {
        return Err(Error::invalid("initial estimate must be square"));
    }
    PenaltySpec::new(family, lambda)
        .with_tau(tau)
        .validate(initial.nrows())?;
    if lambda == 0.0 && family != PenaltyFamily::Lasso {
        return Err(Error::invalid(
            "LLA weights are undefined for a nonconvex penalty at lambda = 0",
        ));
    }
    Ok(Array2::from_shape_fn(initial.dim(), |(i, j)| {
        if i == j {
            0.0
        } else if family == PenaltyFamily::Lasso {
            1.0
        } else {
            penalty_derivative(family, initial[[i, j]], lambda, tau) / lambda
        }
    }))
}

/// One-step LLA refit: a single weighted ADMM solve with
/// [`lla_weights`] computed from `initial.estimate`, diagonal unpenalised.
pub fn lla_refit(
    svd: &ThinSvd,
    initial: &FitResult,
    family: PenaltyFamily,
    lambda: f64,
    tau: f64,
    cfg: &AdmmConfig,
) -> Result<FitResult> {
    let weights = lla_weights(&initial.estimate, family, lambda, tau)?;
    let penalty = PenaltySpec::lasso(lambda)
        .with_weights(weights)
        .with_diagonal(false);
    fit(svd, &penalty, cfg, None)
}
