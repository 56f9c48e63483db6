use ndarray::{Array2, Axis};
use ndarray_linalg::{Eigh, UPLO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    /// `Ω = (0.5^|i−j|)`.
    Case1,
    /// The tridiagonal inverse of case 1.
    Case2,
    /// Block diagonal, 5×5 equicorrelation blocks with random weights.
    Case3,
}

/// A true precision matrix `Ω` together with `Σ = Ω⁻¹`.
#[derive(Debug, Clone)]
pub struct PrecisionModel {
    /// `None` for user-supplied matrices.
    pub kind: Option<CaseKind>,
    pub omega: Array2<f64>,
    pub sigma: Array2<f64>,
    pub min_eigen: f64,
    pub log_det: f64,
}

impl PrecisionModel {
    pub fn p(&self) -> usize {
        self.omega.nrows()
    }

    /// Wrap an arbitrary symmetric positive-definite precision matrix,
    /// inverting it spectrally.
    pub fn from_precision(omega: Array2<f64>) -> Result<Self> {
        let (vals, vecs) = omega.eigh(UPLO::Lower)?;
        let sigma = (&vecs * &vals.mapv(|v| 1.0 / v)).dot(&vecs.t());
        Self::with_inverse(None, omega, sigma)
    }

    fn with_inverse(
        kind: Option<CaseKind>,
        omega: Array2<f64>,
        sigma: Array2<f64>,
    ) -> Result<Self> {
        if !omega.is_square() || omega.dim() != sigma.dim() {
            return Err(Error::invalid(
                "precision and covariance must be square and equal-sized",
            ));
        }
        let vals = omega.eigh(UPLO::Lower)?.0;
        let min_eigen = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_eigen > 0.0) {
            return Err(Error::invalid(format!(
                "precision matrix is not positive definite (min eigenvalue {min_eigen})"
            )));
        }
        let log_det = vals.iter().map(|v| v.ln()).sum();
        Ok(Self {
            kind,
            omega,
            sigma,
            min_eigen,
            log_det,
        })
    }

    /// Symmetric square root of `Σ`.
    fn sigma_factor(&self) -> Result<Array2<f64>> {
        let (vals, vecs) = self.sigma.eigh(UPLO::Lower)?;
        if vals.iter().any(|v| *v < -1e-12) {
            return Err(Error::numerical("covariance has a negative eigenvalue"));
        }
        Ok((&vecs * &vals.mapv(|v| v.max(0.0).sqrt())).dot(&vecs.t()))
    }
}

fn ar1(p: usize) -> Array2<f64> {
    Array2::from_shape_fn((p, p), |(i, j)| 0.5f64.powi(i.abs_diff(j) as i32))
}

fn ar1_inverse(p: usize) -> Array2<f64> {
    Array2::from_shape_fn((p, p), |(i, j)| {
        if i == j {
            if i == 0 || i == p - 1 {
                4.0 / 3.0
            } else {
                5.0 / 3.0
            }
        } else if i.abs_diff(j) == 1 {
            -2.0 / 3.0
        } else {
            0.0
        }
    })
}

/// Case 1: `Ω_ij = 0.5^|i−j|`.
pub fn gen_case1(p: usize) -> Result<PrecisionModel> {
    if p == 0 {
        return Err(Error::invalid("p must be at least 1"));
    }
    if p == 1 {
        return PrecisionModel::with_inverse(Some(CaseKind::Case1), ar1(1), ar1(1));
    }
    PrecisionModel::with_inverse(Some(CaseKind::Case1), ar1(p), ar1_inverse(p))
}

/// Case 2: `(1/3)·tridiag(−2; 4, 5, …, 5, 4; −2)`, the inverse of case 1.
pub fn gen_case2(p: usize) -> Result<PrecisionModel> {
    if p < 2 {
        return Err(Error::invalid("case 2 needs p >= 2"));
    }
    PrecisionModel::with_inverse(Some(CaseKind::Case2), ar1_inverse(p), ar1(p))
}

/// Case 3: `diag(w₁Ω₀, …, w_{p/5}Ω₀)` with `Ω₀ = 0.5·I + 0.5·J` (5×5) and
/// weights drawn from U[0.5, 5] then divided by their mean.
pub fn gen_case3(p: usize, seed: u64) -> Result<PrecisionModel> {
    if p == 0 || !p.is_multiple_of(5) {
        return Err(Error::invalid(format!(
            "case 3 needs p divisible by 5, got {p}"
        )));
    }
    let blocks = p / 5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<f64> = (0..blocks).map(|_| rng.random_range(0.5..=5.0)).collect();
    let mean = w.iter().sum::<f64>() / blocks as f64;
    w.iter_mut().for_each(|v| *v /= mean);
    // Ω₀⁻¹ = 2(I − J/6)
    let omega = Array2::from_shape_fn((p, p), |(i, j)| {
        if i / 5 != j / 5 {
            0.0
        } else if i == j {
            w[i / 5]
        } else {
            0.5 * w[i / 5]
        }
    });
    let sigma = Array2::from_shape_fn((p, p), |(i, j)| {
        if i / 5 != j / 5 {
            0.0
        } else {
            let base = if i == j { 2.0 - 1.0 / 3.0 } else { -1.0 / 3.0 };
            base / w[i / 5]
        }
    });
    PrecisionModel::with_inverse(Some(CaseKind::Case3), omega, sigma)
}

pub fn generate(kind: CaseKind, p: usize, seed: u64) -> Result<PrecisionModel> {
    match kind {
        CaseKind::Case1 => gen_case1(p),
        CaseKind::Case2 => gen_case2(p),
        CaseKind::Case3 => gen_case3(p, seed),
    }
}

/// `n` draws from `N(0, Σ)`: seeded standard normals (row-major) times the
/// symmetric square root of `Σ`.
pub fn sample_gaussian(model: &PrecisionModel, n: usize, seed: u64) -> Result<DataMatrix> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let p = model.p();
    let factor = model.sigma_factor()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = Array2::<f64>::zeros((n, p));
    for mut row in z.axis_iter_mut(Axis(0)) {
        row.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
    }
    DataMatrix::new(z.dot(&factor))
}
