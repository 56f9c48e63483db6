use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::estimator::Estimator;
use crate::admm::check_grid;
use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, ScaledData};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub lambdas: Vec<f64>,
    /// Held-out loss averaged over folds, one entry per λ.
    pub cv_curve: Vec<f64>,
    pub best_index: usize,
    pub best_lambda: f64,
    pub fold_count: usize,
}

/// Shuffle `0..n` with a seeded RNG and cut it into `k` contiguous folds whose
/// sizes differ by at most one. Indices within a fold are sorted.
pub fn fold_partition(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::invalid(format!("need at least 2 folds, got {k}")));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "{k} folds requested for {n} samples"
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        let mut fold = idx[start..start + len].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += len;
    }
    Ok(folds)
}

/// K-fold cross-validation of `estimator` over a descending grid.
///
/// Each training split runs a warm-started path; the held-out covariance is
/// centred with the training mean when the estimator centres. The smallest
/// mean held-out loss wins, ties going to the larger λ.
pub fn cross_validate(
    x: &DataMatrix,
    grid: &[f64],
    estimator: &Estimator,
    folds: usize,
    seed: u64,
) -> Result<CvResult> {
    check_grid(grid)?;
    let partition = fold_partition(x.n(), folds, seed)?;
    let mut curve = vec![0.0; grid.len()];
    for fold in &partition {
        let mut held = vec![false; x.n()];
        fold.iter().for_each(|&i| held[i] = true);
        let train_idx: Vec<usize> = (0..x.n()).filter(|&i| !held[i]).collect();
        if train_idx.len() < 2 {
            return Err(Error::invalid("a training split has fewer than 2 rows"));
        }
        let train = x.select_rows(&train_idx)?;
        let test = x.select_rows(fold)?;
        let mean = estimator.center.then(|| train.column_means());
        let test_gram = ScaledData::new(&test, mean.as_ref());
        let path = estimator.path(&train, grid)?;
        for (c, fit) in curve.iter_mut().zip(&path.fits) {
            *c += estimator.heldout_score(&fit.estimate, &test_gram)?;
        }
    }
    curve.iter_mut().for_each(|c| *c /= partition.len() as f64);

    let mut best: Option<usize> = None;
    for (i, &c) in curve.iter().enumerate() {
        if c.is_finite() && best.is_none_or(|b| c < curve[b]) {
            best = Some(i);
        }
    }
    let best_index =
        best.ok_or_else(|| Error::numerical("no grid point has a finite held-out loss"))?;
    Ok(CvResult {
        lambdas: grid.to_vec(),
        cv_curve: curve,
        best_index,
        best_lambda: grid[best_index],
        fold_count: partition.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_covers_everything_once() {
        let folds = fold_partition(23, 5, 9).unwrap();
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![5, 5, 5, 4, 4]);
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        assert_eq!(folds, fold_partition(23, 5, 9).unwrap());
        assert_ne!(folds, fold_partition(23, 5, 10).unwrap());
    }

    #[test]
    fn partition_rejects_bad_k() {
        assert!(fold_partition(10, 1, 0).is_err());
        assert!(fold_partition(3, 4, 0).is_err());
        assert!(fold_partition(4, 4, 0).is_ok());
    }
}
