use ndarray::Array2;
use ndarray_linalg::{EigValsh, SVD, UPLO};
use serde::{Deserialize, Serialize};

use super::models::PrecisionModel;
use crate::error::{Error, Result};
use crate::matrix::frobenius;

/// Accuracy of an estimate `Ω̂` against the true model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    /// `‖Ω − Ω̂‖_F / √p`.
    pub loss1: f64,
    /// Spectral norm `‖Ω − Ω̂‖₂`.
    pub loss2: f64,
    /// `√((tr(ΣΩ̂) − log|ΣΩ̂| − p)/p)`; `None` unless `Ω̂` is positive definite.
    pub loss3: Option<f64>,
    /// `√((tr(Ω̂ᵀΣΩ̂)/2 − tr Ω̂ + tr Ω/2)/p)`.
    pub loss4: f64,
    /// Smallest eigenvalue of the symmetric part of `Ω̂`.
    pub min_eigen: f64,
}

pub fn losses(model: &PrecisionModel, estimate: &Array2<f64>) -> Result<LossReport> {
    let p = model.p();
    if estimate.dim() != (p, p) {
        return Err(Error::invalid(format!(
            "estimate is {:?}, model is {p}×{p}",
            estimate.dim()
        )));
    }
    if estimate.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("estimate contains non-finite entries"));
    }
    let pf = p as f64;
    let diff = &model.omega - estimate;
    let loss1 = frobenius(&diff) / pf.sqrt();
    let (_, sv, _) = diff.svd(false, false)?;
    let loss2 = sv.iter().cloned().fold(0.0, f64::max);

    let sym = (estimate + &estimate.t()) * 0.5;
    let vals = sym.eigvalsh(UPLO::Lower)?;
    let min_eigen = vals.iter().cloned().fold(f64::INFINITY, f64::min);

    let sigma_est = model.sigma.dot(estimate);
    let tr_sigma_est = sigma_est.diag().sum();
    let loss3 = if min_eigen > 0.0 {
        let logdet_est: f64 = vals.iter().map(|v| v.ln()).sum();
        // log|ΣΩ̂| = log|Ω̂| − log|Ω|
        let inner = (tr_sigma_est - (logdet_est - model.log_det) - pf) / pf;
        Some(inner.max(0.0).sqrt())
    } else {
        None
    };

    // tr(Ω̂ᵀΣΩ̂) = Σ_ij Ω̂_ij (ΣΩ̂)_ij
    let quad = (estimate * &sigma_est).sum();
    let inner4 = (0.5 * quad - estimate.diag().sum() + 0.5 * model.omega.diag().sum()) / pf;
    let loss4 = inner4.max(0.0).sqrt();

    Ok(LossReport {
        loss1,
        loss2,
        loss3,
        loss4,
        min_eigen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::gen_case1;

    #[test]
    fn perfect_estimate_has_zero_loss() {
        let m = gen_case1(6).unwrap();
        let r = losses(&m, &m.omega).unwrap();
        assert!(r.loss1 < 1e-15 && r.loss2 < 1e-15);
        assert!(r.loss3.unwrap() < 1e-6);
        assert!(r.loss4 < 1e-6);
        assert!((r.min_eigen - m.min_eigen).abs() < 1e-12);
    }

    #[test]
    fn scaled_identity_against_identity() {
        let m = PrecisionModel::from_precision(Array2::eye(4)).unwrap();
        let r = losses(&m, &(Array2::<f64>::eye(4) * 2.0)).unwrap();
        assert!((r.loss1 - 1.0).abs() < 1e-14);
        assert!((r.loss2 - 1.0).abs() < 1e-14);
        // (2 − ln 2 − 1), (2 − 2 + 1/2)
        assert!((r.loss3.unwrap() - (1.0 - 2f64.ln()).sqrt()).abs() < 1e-14);
        assert!((r.loss4 - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn loss3_undefined_when_indefinite() {
        let m = PrecisionModel::from_precision(Array2::eye(2)).unwrap();
        let r = losses(&m, &ndarray::array![[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(r.loss3.is_none());
        assert!(r.min_eigen < 0.0);
        assert!(losses(&m, &Array2::eye(3)).is_err());
    }
}
