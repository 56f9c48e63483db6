//! Dense matrix primitives shared by the solvers.
//!
//! Matrices are `ndarray::Array2<f64>`. The sample covariance is never needed
//! in dense form by the estimators: [`thin_svd_gram`] factors it as
//! `S = U·diag(τ)·Uᵀ` directly from the data, and the [`Gram`] trait exposes
//! the two products (`S·X` and `tr(XᵀSX)`) the objectives need.

use ndarray::{s, Array1, Array2, ArrayView2, Axis, Zip};
use ndarray_linalg::{JobSvd, SVDDC};

use crate::error::{Error, Result};

/// Relative cutoff below which squared singular values are set to exactly 0.
pub const TAU_CLAMP: f64 = 1e-12;

/// An `n × p` data matrix: rows are samples, columns are variables.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Array2<f64>,
}

impl DataMatrix {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let (n, p) = values.dim();
        if n == 0 || p == 0 {
            return Err(Error::invalid(format!(
                "data matrix must be non-empty, got {n}x{p}"
            )));
        }
        if let Some(((i, j), v)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite entry {v} at ({i}, {j})"
            )));
        }
        Ok(Self { values })
    }

    /// Sample count.
    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    /// Variable count.
    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.values
    }

    /// Copy of the rows at `idx`, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> Result<DataMatrix> {
        DataMatrix::new(self.values.select(Axis(0), idx))
    }

    /// Column means.
    pub fn column_means(&self) -> Array1<f64> {
        self.values.mean_axis(Axis(0)).expect("n >= 1")
    }

    /// Rows shifted by `mean` and scaled by `1/√n`, so that `ZᵀZ` is the
    /// covariance about `mean`.
    fn scaled(&self, mean: Option<&Array1<f64>>) -> Array2<f64> {
        let scale = 1.0 / (self.n() as f64).sqrt();
        let mut z = self.values.clone();
        if let Some(mean) = mean {
            z -= mean;
        }
        z *= scale;
        z
    }
}

/// Thin spectral factorisation `S = U·diag(τ)·Uᵀ` with `U` of size `p × m`,
/// `m = min(n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinSvd {
    u: Array2<f64>,
    taus: Array1<f64>,
}

impl ThinSvd {
    /// Assemble from parts. `u` must have orthonormal columns (not checked
    /// beyond shapes) and `taus` must be non-negative and non-increasing.
    pub fn from_parts(u: Array2<f64>, taus: Array1<f64>) -> Result<Self> {
        if u.ncols() != taus.len() {
            return Err(Error::invalid(format!(
                "U has {} columns but {} eigenvalues were given",
                u.ncols(),
                taus.len()
            )));
        }
        if taus.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::invalid(
                "eigenvalues must be finite and non-negative",
            ));
        }
        if taus.windows(2).into_iter().any(|w| w[0] < w[1]) {
            return Err(Error::invalid(
                "eigenvalues must be sorted in descending order",
            ));
        }
        Ok(Self { u, taus })
    }

    pub fn u(&self) -> &Array2<f64> {
        &self.u
    }

    pub fn taus(&self) -> &Array1<f64> {
        &self.taus
    }

    /// Dimension `p`.
    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// Rank bound `m = min(n, p)`.
    pub fn rank_bound(&self) -> usize {
        self.taus.len()
    }

    /// Dense `U·diag(τ)·Uᵀ`.
    pub fn covariance(&self) -> Array2<f64> {
        let scaled = &self.u * &self.taus;
        scaled.dot(&self.u.t())
    }
}

/// Operations with the sample covariance that the objectives and KKT checks
/// need, without committing to a dense `S`.
pub trait Gram {
    fn dim(&self) -> usize;

    /// `S·X`.
    fn apply(&self, x: ArrayView2<f64>) -> Array2<f64>;

    /// `tr(XᵀSX)`.
    fn quadratic_trace(&self, x: ArrayView2<f64>) -> f64;
}

impl Gram for ThinSvd {
    fn dim(&self) -> usize {
        self.u.nrows()
    }

    fn apply(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut ux = self.u.t().dot(&x);
        ux *= &self.taus.view().insert_axis(Axis(1));
        self.u.dot(&ux)
    }

    fn quadratic_trace(&self, x: ArrayView2<f64>) -> f64 {
        let ux = self.u.t().dot(&x);
        ux.outer_iter()
            .zip(self.taus.iter())
            .map(|(row, t)| t * row.dot(&row))
            .sum()
    }
}

impl Gram for Array2<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: ArrayView2<f64>) -> Array2<f64> {
        self.dot(&x)
    }

    fn quadratic_trace(&self, x: ArrayView2<f64>) -> f64 {
        let sx = self.dot(&x);
        (&sx * &x).sum()
    }
}

/// Sample covariance held as the scaled data matrix `Z = (X − x̄)/√n`, so
/// that `S = ZᵀZ` is applied in `O(n·p²)` without forming it.
#[derive(Debug, Clone)]
pub struct ScaledData {
    z: Array2<f64>,
}

impl ScaledData {
    /// Covariance of `x` about `mean` (`None` for the raw second moment).
    pub fn new(x: &DataMatrix, mean: Option<&Array1<f64>>) -> Self {
        Self { z: x.scaled(mean) }
    }

    /// `tr(S·Ω)`.
    pub fn trace_product(&self, omega: &Array2<f64>) -> f64 {
        (&self.z.dot(omega) * &self.z).sum()
    }
}

impl Gram for ScaledData {
    fn dim(&self) -> usize {
        self.z.ncols()
    }

    fn apply(&self, x: ArrayView2<f64>) -> Array2<f64> {
        self.z.t().dot(&self.z.dot(&x))
    }

    fn quadratic_trace(&self, x: ArrayView2<f64>) -> f64 {
        let zx = self.z.dot(&x);
        zx.iter().map(|v| v * v).sum()
    }
}

/// Sample covariance with `1/n` scaling: `XᵀX/n`, or `(X − x̄)ᵀ(X − x̄)/n`
/// when `center` is set.
pub fn sample_covariance(x: &DataMatrix, center: bool) -> Result<Array2<f64>> {
    let z = if center {
        if x.n() < 2 {
            return Err(Error::invalid("centering requires at least two samples"));
        }
        x.scaled(Some(&x.column_means()))
    } else {
        x.scaled(None)
    };
    let mut s = z.t().dot(&z);
    symmetrize_in_place(&mut s);
    Ok(s)
}

/// Thin SVD of `X/√n` (optionally centred). The squared singular values are
/// the non-zero spectrum of `S`; values below `TAU_CLAMP·max τ` are set to 0.
pub fn thin_svd_gram(x: &DataMatrix, center: bool) -> Result<ThinSvd> {
    let z = if center {
        if x.n() < 2 {
            return Err(Error::invalid("centering requires at least two samples"));
        }
        x.scaled(Some(&x.column_means()))
    } else {
        x.scaled(None)
    };
    let (_, sv, vt) = z.svddc(JobSvd::Some)?;
    let vt = vt.ok_or_else(|| Error::numerical("SVD returned no right singular vectors"))?;
    let m = x.n().min(x.p());
    let u = vt.slice(s![..m, ..]).t().to_owned();
    let mut taus = sv.slice(s![..m]).mapv(|v| v * v);
    let cutoff = TAU_CLAMP * taus.iter().cloned().fold(0.0, f64::max);
    taus.mapv_inplace(|t| if t <= cutoff { 0.0 } else { t });
    if taus.iter().any(|t| !t.is_finite()) {
        return Err(Error::numerical("non-finite singular value"));
    }
    ThinSvd::from_parts(u, taus)
}

/// Eigenvalues (ascending) and, if `vectors` is set, eigenvectors (columns)
/// of a symmetric matrix by divide and conquer (LAPACK `dsyevd`). Only the
/// upper triangle of `m` is read.
pub fn sym_eigen(m: &Array2<f64>, vectors: bool) -> Result<(Array1<f64>, Option<Array2<f64>>)> {
    use std::ffi::{c_char, c_int};
    if !m.is_square() {
        return Err(Error::invalid("eigendecomposition needs a square matrix"));
    }
    let p = m.nrows();
    if p == 0 {
        return Ok((Array1::zeros(0), vectors.then(|| Array2::zeros((0, 0)))));
    }
    let n = c_int::try_from(p)
        .map_err(|_| Error::TooLarge(format!("dimension {p} exceeds LAPACK limits")))?;
    // Row-major storage of m is column-major storage of mᵀ, whose lower
    // triangle is the upper triangle of m.
    let mut a: Vec<f64> = m.iter().cloned().collect();
    let mut w = vec![0.0; p];
    let jobz = if vectors { b'V' } else { b'N' } as c_char;
    let uplo = b'L' as c_char;
    let mut info: c_int = 0;
    let mut work_len = [0.0f64];
    let mut iwork_len = [0 as c_int];
    let query: c_int = -1;
    // SAFETY: every pointer refers to a live buffer of the size LAPACK
    // expects for an n×n problem; -1 requests workspace sizes only.
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &n,
            a.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            work_len.as_mut_ptr(),
            &query,
            iwork_len.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::numerical(format!(
            "dsyevd workspace query failed (info = {info})"
        )));
    }
    let lwork = work_len[0] as c_int;
    let liwork = iwork_len[0];
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0 as c_int; liwork.max(1) as usize];
    // SAFETY: as above, with workspaces of the queried sizes.
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &n,
            a.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::numerical(format!(
            "dsyevd failed to converge (info = {info})"
        )));
    }
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical(
            "eigendecomposition produced non-finite values",
        ));
    }
    // Column-major eigenvectors read row-major give Qᵀ.
    let q = vectors.then(|| {
        Array2::from_shape_vec((p, p), a)
            .expect("p*p buffer")
            .reversed_axes()
    });
    Ok((Array1::from(w), q))
}

/// Scalar soft thresholding `sign(x)·max(|x| − t, 0)`.
#[inline]
pub fn soft(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Element-wise soft thresholding with per-entry thresholds.
pub fn soft_threshold(m: &Array2<f64>, t: &Array2<f64>) -> Result<Array2<f64>> {
    if m.dim() != t.dim() {
        return Err(Error::invalid(format!(
            "shape mismatch: matrix {:?}, thresholds {:?}",
            m.dim(),
            t.dim()
        )));
    }
    if t.iter().any(|v| v.is_nan() || *v < 0.0) {
        return Err(Error::invalid("thresholds must be non-negative"));
    }
    Ok(Zip::from(m).and(t).map_collect(|&x, &th| soft(x, th)))
}

/// Entry-wise product.
pub fn hadamard(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(format!(
            "shape mismatch: {:?} vs {:?}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a * b)
}

/// Symmetrise by keeping, for each off-diagonal pair, the entry of smaller
/// magnitude. On ties the lower-triangle entry `A_ji` wins for both positions.
///
/// # Panics
/// If `a` is not square.
pub fn min_abs_symmetrize(a: &Array2<f64>) -> Array2<f64> {
    assert!(a.is_square(), "min_abs_symmetrize needs a square matrix");
    let p = a.nrows();
    let mut out = a.clone();
    for i in 0..p {
        for j in (i + 1)..p {
            let (upper, lower) = (a[[i, j]], a[[j, i]]);
            let v = if upper.abs() < lower.abs() {
                upper
            } else {
                lower
            };
            out[[i, j]] = v;
            out[[j, i]] = v;
        }
    }
    out
}

/// Kronecker product `A ⊗ B`. Intended for small test-scale problems only.
pub fn kron(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &aij) in a.indexed_iter() {
        out.slice_mut(s![i * br..(i + 1) * br, j * bc..(j + 1) * bc])
            .assign(&(b * aij));
    }
    out
}

/// Column-stacking vectorisation.
pub fn vec(a: &Array2<f64>) -> Array1<f64> {
    a.t().iter().cloned().collect()
}

/// Inverse of [`vec`] for a `rows × cols` matrix.
pub fn unvec(v: &Array1<f64>, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |(i, j)| v[j * rows + i])
}

pub fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest absolute entry.
pub fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest absolute entry of `A − Aᵀ`.
pub fn asymmetry(a: &Array2<f64>) -> f64 {
    max_abs(&(a - &a.t()))
}

pub(crate) fn symmetrize_in_place(a: &mut Array2<f64>) {
    let p = a.nrows();
    for i in 0..p {
        for j in (i + 1)..p {
            let v = 0.5 * (a[[i, j]] + a[[j, i]]);
            a[[i, j]] = v;
            a[[j, i]] = v;
        }
    }
}
