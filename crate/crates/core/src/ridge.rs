//! Closed-form solvers for the two ridge-shifted systems of the Ω-update:
//!
//! ```text
//! SΩ + ρΩ = C                 (loss L₁)
//! ½SΩ + ½ΩS + ρΩ = C          (loss L₂)
//! ```
//!
//! With `S = U·diag(τ)·Uᵀ` (`U` is `p × m`), both inverses are low-rank
//! corrections of `ρ⁻¹I`, so each solve costs `O(m·p²)` and works entirely
//! with `p × m` and `m × m` intermediates.

use ndarray::linalg::general_mat_mul;
use ndarray::{Array1, Array2, Axis, Zip};

use crate::error::{Error, Result};
use crate::matrix::{kron, ThinSvd};

/// Largest `p` accepted by [`ridge_inverse_l2_kron`] (the result is `p² × p²`).
pub const KRON_MAX_DIM: usize = 12;

/// Spectral weights for a fixed step size `ρ`:
///
/// * `lam1[i] = τᵢ/(τᵢ+ρ)`
/// * `lam2[i] = τᵢ/(τᵢ+2ρ)`
/// * `lam3[i,j] = τᵢτⱼ(τᵢ+τⱼ+4ρ) / ((τᵢ+2ρ)(τⱼ+2ρ)(τᵢ+τⱼ+2ρ))`
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeSpectrum {
    pub rho: f64,
    pub lam1: Array1<f64>,
    pub lam2: Array1<f64>,
    pub lam3: Array2<f64>,
}

pub fn build_spectrum(svd: &ThinSvd, rho: f64) -> Result<RidgeSpectrum> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!(
            "step size must be positive, got {rho}"
        )));
    }
    let taus = svd.taus();
    let lam1 = taus.mapv(|t| t / (t + rho));
    let lam2 = taus.mapv(|t| t / (t + 2.0 * rho));
    let m = taus.len();
    let lam3 = Array2::from_shape_fn((m, m), |(i, j)| {
        let (ti, tj) = (taus[i], taus[j]);
        ti * tj * (ti + tj + 4.0 * rho)
            / ((ti + 2.0 * rho) * (tj + 2.0 * rho) * (ti + tj + 2.0 * rho))
    });
    Ok(RidgeSpectrum {
        rho,
        lam1,
        lam2,
        lam3,
    })
}

/// Dense `(S + ρI)⁻¹ = ρ⁻¹I − ρ⁻¹U·diag(lam1)·Uᵀ`.
pub fn ridge_inverse_l1(svd: &ThinSvd, rho: f64) -> Result<Array2<f64>> {
    let spec = build_spectrum(svd, rho)?;
    let u = svd.u();
    let mut inv = (u * &spec.lam1).dot(&u.t());
    inv.mapv_inplace(|v| -v / rho);
    inv.diag_mut().mapv_inplace(|v| v + 1.0 / rho);
    Ok(inv)
}

/// Dense `(½S⊗I + ½I⊗S + ρI)⁻¹` assembled term by term from Kronecker
/// products. Only for verification at small `p`.
pub fn ridge_inverse_l2_kron(svd: &ThinSvd, rho: f64) -> Result<Array2<f64>> {
    let p = svd.dim();
    if p > KRON_MAX_DIM {
        return Err(Error::TooLarge(format!(
            "Kronecker inverse limited to p <= {KRON_MAX_DIM}, got p = {p}"
        )));
    }
    let spec = build_spectrum(svd, rho)?;
    let u = svd.u();
    let eye = Array2::<f64>::eye(p);
    let ul2u = (u * &spec.lam2).dot(&u.t());
    let uu = kron(u, u);
    // vec(Λ₃) is column-stacked; entry (i, j) sits at j·m + i.
    let m = spec.lam3.nrows();
    let vec_l3 = Array1::from_shape_fn(m * m, |k| spec.lam3[[k % m, k / m]]);
    let low_rank = (&uu * &vec_l3).dot(&uu.t());
    let inv = Array2::<f64>::eye(p * p) - kron(&ul2u, &eye) - kron(&eye, &ul2u) + low_rank;
    Ok(inv / rho)
}

fn check_shapes(spec: &RidgeSpectrum, svd: &ThinSvd, c: &Array2<f64>) -> Result<()> {
    let p = svd.dim();
    if c.dim() != (p, p) {
        return Err(Error::invalid(format!(
            "C is {:?}, expected ({p}, {p})",
            c.dim()
        )));
    }
    if spec.lam1.len() != svd.rank_bound() {
        return Err(Error::invalid(
            "spectrum was built from a different factorisation",
        ));
    }
    Ok(())
}

/// Scratch space for the in-place solvers, sized for one factorisation.
#[derive(Debug, Clone)]
pub(crate) struct RidgeWork {
    w: Array2<f64>,
    g: Array2<f64>,
    core: Array2<f64>,
    x: Array2<f64>,
}

impl RidgeWork {
    pub fn new(svd: &ThinSvd) -> Self {
        let (p, m) = (svd.dim(), svd.rank_bound());
        Self {
            w: Array2::zeros((m, p)),
            g: Array2::zeros((m, p)),
            core: Array2::zeros((m, m)),
            x: Array2::zeros((p, p)),
        }
    }
}

/// Solve `SΩ + ρΩ = C` as `ρ⁻¹C − ρ⁻¹U·diag(lam1)·(UᵀC)`.
pub fn solve_l1(spec: &RidgeSpectrum, svd: &ThinSvd, c: &Array2<f64>) -> Result<Array2<f64>> {
    check_shapes(spec, svd, c)?;
    let mut out = Array2::zeros(c.dim());
    solve_l1_into(spec, svd, c, &mut RidgeWork::new(svd), &mut out);
    Ok(out)
}

pub(crate) fn solve_l1_into(
    spec: &RidgeSpectrum,
    svd: &ThinSvd,
    c: &Array2<f64>,
    work: &mut RidgeWork,
    out: &mut Array2<f64>,
) {
    let u = svd.u();
    let inv_rho = 1.0 / spec.rho;
    general_mat_mul(1.0, &u.t(), c, 0.0, &mut work.w);
    work.w *= &(&spec.lam1 * inv_rho).insert_axis(Axis(1));
    Zip::from(&mut *out)
        .and(c)
        .for_each(|o, &c| *o = c * inv_rho);
    general_mat_mul(-1.0, u, &work.w, 1.0, out);
}

/// Solve `½SΩ + ½ΩS + ρΩ = C` as
/// `ρ⁻¹C − ρ⁻¹CU·diag(lam2)·Uᵀ − ρ⁻¹U·diag(lam2)·UᵀC + ρ⁻¹U(lam3 ∘ UᵀCU)Uᵀ`.
///
/// A bitwise-symmetric `C` takes a cheaper route whose output is also
/// bitwise symmetric.
pub fn solve_l2(spec: &RidgeSpectrum, svd: &ThinSvd, c: &Array2<f64>) -> Result<Array2<f64>> {
    check_shapes(spec, svd, c)?;
    let c = c.as_standard_layout().into_owned();
    if is_exactly_symmetric(&c) {
        let mut out = Array2::zeros(c.dim());
        solve_l2_symmetric_into(spec, svd, &c, &mut RidgeWork::new(svd), &mut out);
        Ok(out)
    } else {
        Ok(solve_l2_general(spec, svd, &c))
    }
}

pub(crate) fn is_exactly_symmetric(c: &Array2<f64>) -> bool {
    let p = c.nrows();
    (0..p).all(|i| (i + 1..p).all(|j| c[[i, j]] == c[[j, i]]))
}

pub(crate) fn solve_l2_general(
    spec: &RidgeSpectrum,
    svd: &ThinSvd,
    c: &Array2<f64>,
) -> Array2<f64> {
    let u = svd.u();
    let lam2_col = spec.lam2.view().insert_axis(Axis(1));
    let w = u.t().dot(c); // UᵀC, m × p
    let v = c.dot(u); // CU, p × m
    let mut core = w.dot(u); // UᵀCU, m × m
    core *= &spec.lam3;
    // U·(diag(lam2)·UᵀC − (lam3 ∘ UᵀCU)·Uᵀ)
    let right = &w * &lam2_col - core.dot(&u.t());
    let left = (&v * &spec.lam2).dot(&u.t());
    let mut out = c - &left - &u.dot(&right);
    out *= 1.0 / spec.rho;
    out
}

/// For symmetric `C` the two rank-`m` corrections are transposes of each
/// other: `ρΩ = C − (UG + (UG)ᵀ)` with `G = diag(lam2)·UᵀC − ½(lam3 ∘ UᵀCU)·Uᵀ`.
/// `c` and `out` must be in standard layout.
pub(crate) fn solve_l2_symmetric_into(
    spec: &RidgeSpectrum,
    svd: &ThinSvd,
    c: &Array2<f64>,
    work: &mut RidgeWork,
    out: &mut Array2<f64>,
) {
    let u = svd.u();
    general_mat_mul(1.0, &u.t(), c, 0.0, &mut work.w);
    general_mat_mul(1.0, &work.w, u, 0.0, &mut work.core);
    Zip::from(&mut work.core)
        .and(&spec.lam3)
        .for_each(|k, &l| *k *= 0.5 * l);
    Zip::from(&mut work.g)
        .and(&work.w)
        .and_broadcast(spec.lam2.view().insert_axis(Axis(1)))
        .for_each(|g, &w, &l| *g = w * l);
    general_mat_mul(-1.0, &work.core, &u.t(), 1.0, &mut work.g);
    general_mat_mul(1.0, u, &work.g, 0.0, &mut work.x);

    let p = c.nrows();
    let inv_rho = 1.0 / spec.rho;
    let cs = c.as_slice().expect("standard layout");
    let xs = work.x.as_slice().expect("standard layout");
    let os = out.as_slice_mut().expect("standard layout");
    // Tiled so that the transposed reads of X stay in cache.
    const TILE: usize = 64;
    for bi in (0..p).step_by(TILE) {
        for bj in (bi..p).step_by(TILE) {
            for i in bi..(bi + TILE).min(p) {
                let from = if bi == bj { i } else { bj };
                for j in from..(bj + TILE).min(p) {
                    // a + b == b + a in IEEE arithmetic, so both halves match bitwise.
                    let v = (cs[i * p + j] - (xs[i * p + j] + xs[j * p + i])) * inv_rho;
                    os[i * p + j] = v;
                    os[j * p + i] = v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{max_abs, thin_svd_gram, DataMatrix};
    use ndarray::array;

    fn diag_svd(taus: &[f64]) -> ThinSvd {
        let p = taus.len();
        ThinSvd::from_parts(Array2::<f64>::eye(p), Array1::from(taus.to_vec())).unwrap()
    }

    #[test]
    fn spectrum_single_tau() {
        let spec = build_spectrum(&diag_svd(&[2.0]), 1.0).unwrap();
        assert!((spec.lam1[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((spec.lam2[0] - 0.5).abs() < 1e-15);
        assert!((spec.lam3[[0, 0]] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn spectrum_zero_taus() {
        let spec = build_spectrum(&diag_svd(&[0.0, 0.0]), 0.7).unwrap();
        assert!(spec
            .lam1
            .iter()
            .chain(spec.lam2.iter())
            .chain(spec.lam3.iter())
            .all(|v| *v == 0.0));
    }

    #[test]
    fn spectrum_two_taus() {
        let spec = build_spectrum(&diag_svd(&[3.0, 1.0]), 0.5).unwrap();
        assert!((spec.lam1[0] - 6.0 / 7.0).abs() < 1e-15);
        assert!((spec.lam1[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((spec.lam3[[0, 1]] - 0.45).abs() < 1e-15);
        assert_eq!(spec.lam3[[0, 1]], spec.lam3[[1, 0]]);
    }

    #[test]
    fn spectrum_rejects_bad_rho() {
        let svd = diag_svd(&[1.0]);
        assert!(build_spectrum(&svd, 0.0).is_err());
        assert!(build_spectrum(&svd, -1.0).is_err());
        assert!(build_spectrum(&svd, f64::NAN).is_err());
    }

    #[test]
    fn inverse_l1_trivial_cases() {
        let inv = ridge_inverse_l1(&diag_svd(&[0.0, 0.0, 0.0]), 2.0).unwrap();
        assert!(max_abs(&(&inv - &(Array2::<f64>::eye(3) * 0.5))) < 1e-15);
        let inv = ridge_inverse_l1(&diag_svd(&[2.0, 0.0]), 1.0).unwrap();
        assert!(max_abs(&(&inv - &array![[1.0 / 3.0, 0.0], [0.0, 1.0]])) < 1e-15);
    }

    #[test]
    fn inverse_l2_trivial_cases() {
        let inv = ridge_inverse_l2_kron(&diag_svd(&[0.0, 0.0]), 1.0).unwrap();
        assert!(max_abs(&(&inv - &Array2::<f64>::eye(4))) < 1e-15);
        let inv = ridge_inverse_l2_kron(&diag_svd(&[2.0, 2.0]), 1.0).unwrap();
        assert!(max_abs(&(&inv - &(Array2::<f64>::eye(4) / 3.0))) < 1e-14);
    }

    #[test]
    fn inverse_l2_size_guard() {
        let svd = diag_svd(&[0.0; 13]);
        assert!(matches!(
            ridge_inverse_l2_kron(&svd, 1.0),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn solve_trivial_cases() {
        let c = array![[1.0, 2.0], [-3.0, 0.5]];
        let zero = diag_svd(&[0.0, 0.0]);
        let spec = build_spectrum(&zero, 1.0).unwrap();
        assert_eq!(solve_l1(&spec, &zero, &c).unwrap(), c);
        let spec3 = build_spectrum(&zero, 3.0).unwrap();
        assert!(max_abs(&(&solve_l2(&spec3, &zero, &c).unwrap() - &(&c / 3.0))) < 1e-15);

        let svd = diag_svd(&[2.0, 0.0]);
        let spec = build_spectrum(&svd, 1.0).unwrap();
        let om = solve_l1(&spec, &svd, &Array2::<f64>::eye(2)).unwrap();
        assert!(max_abs(&(&om - &array![[1.0 / 3.0, 0.0], [0.0, 1.0]])) < 1e-15);

        let svd = diag_svd(&[2.0, 2.0]);
        let spec = build_spectrum(&svd, 1.0).unwrap();
        let om = solve_l2(&spec, &svd, &Array2::<f64>::eye(2)).unwrap();
        assert!(max_abs(&(&om - &(Array2::<f64>::eye(2) / 3.0))) < 1e-15);
    }

    #[test]
    fn symmetric_and_general_routes_agree() {
        let x = DataMatrix::new(array![
            [0.3, -1.2, 0.8, 2.0],
            [1.1, 0.4, -0.6, 0.2],
            [-0.9, 0.7, 1.5, -1.1]
        ])
        .unwrap();
        let svd = thin_svd_gram(&x, false).unwrap();
        let spec = build_spectrum(&svd, 0.8).unwrap();
        let b = array![
            [1.0, 0.2, -0.4, 0.0],
            [0.3, 2.0, 0.1, 0.5],
            [0.0, 0.7, 1.0, -0.2],
            [0.9, 0.0, 0.4, 3.0]
        ];
        let c = &b + &b.t();
        let fast = solve_l2(&spec, &svd, &c).unwrap();
        let general = solve_l2_general(&spec, &svd, &c);
        assert!(max_abs(&(&fast - &general)) < 1e-13);
        assert!(is_exactly_symmetric(&fast));
    }

    #[test]
    fn symmetric_route_across_tile_boundaries() {
        let p = 150;
        let x = DataMatrix::new(Array2::from_shape_fn((9, p), |(i, j)| {
            ((i * 31 + j * 17) % 23) as f64 / 7.0 - 1.5
        }))
        .unwrap();
        let svd = thin_svd_gram(&x, false).unwrap();
        let spec = build_spectrum(&svd, 1.3).unwrap();
        let b = Array2::from_shape_fn((p, p), |(i, j)| ((i * 13 + j * 5) % 19) as f64 / 19.0);
        let c = &b + &b.t();
        let fast = solve_l2(&spec, &svd, &c).unwrap();
        let general = solve_l2_general(&spec, &svd, &c);
        assert!(max_abs(&(&fast - &general)) < 1e-12);
        assert!(is_exactly_symmetric(&fast));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let svd = diag_svd(&[1.0, 0.5]);
        let spec = build_spectrum(&svd, 1.0).unwrap();
        let c = Array2::zeros((3, 3));
        assert!(solve_l1(&spec, &svd, &c).is_err());
        assert!(solve_l2(&spec, &svd, &c).is_err());
    }
}
