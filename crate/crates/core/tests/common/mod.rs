//! Independent reference implementations for the integration tests. Nothing
//! here calls into the crate's numerical code: linear algebra is plain
//! Gaussian elimination and Jacobi rotations over `Vec<f64>` data.

// Index loops keep the reference code close to the textbook algorithms.
#![allow(dead_code, clippy::needless_range_loop)]

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.sample(StandardNormal))
}

pub fn symmetric_matrix(rng: &mut ChaCha8Rng, p: usize) -> Array2<f64> {
    let b = normal_matrix(rng, p, p);
    (&b + &b.t()) * 0.5
}

/// Plain triple-loop product.
pub fn matmul(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (n, k) = a.dim();
    assert_eq!(k, b.nrows());
    let m = b.ncols();
    let mut out = Array2::zeros((n, m));
    for i in 0..n {
        for j in 0..m {
            let mut s = 0.0;
            for t in 0..k {
                s += a[[i, t]] * b[[t, j]];
            }
            out[[i, j]] = s;
        }
    }
    out
}

/// `XᵀX / n` by explicit loops.
pub fn covariance(x: &Array2<f64>) -> Array2<f64> {
    let n = x.nrows() as f64;
    matmul(&x.t().to_owned(), x) / n
}

/// Kronecker product by explicit indexing.
pub fn kron(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(i, j)| {
        a[[i / br, j / bc]] * b[[i % br, j % bc]]
    })
}

/// Column-stacking vec.
pub fn vec_cols(a: &Array2<f64>) -> Vec<f64> {
    let (r, c) = a.dim();
    (0..r * c).map(|k| a[[k % r, k / r]]).collect()
}

pub fn unvec_cols(v: &[f64], r: usize, c: usize) -> Array2<f64> {
    Array2::from_shape_fn((r, c), |(i, j)| v[j * r + i])
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// LU with partial pivoting; returns the factors packed in one matrix, the
/// row permutation and the permutation sign.
fn lu(a: &Array2<f64>) -> (Vec<Vec<f64>>, Vec<usize>, f64) {
    let n = a.nrows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&x, &y| m[x][k].abs().partial_cmp(&m[y][k].abs()).unwrap())
            .unwrap();
        if piv != k {
            m.swap(piv, k);
            perm.swap(piv, k);
            sign = -sign;
        }
        let d = m[k][k];
        if d == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = m[i][k] / d;
            m[i][k] = f;
            for j in k + 1..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    (m, perm, sign)
}

/// Solve `A x = b` for each column of `b`.
pub fn solve(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let (m, perm, _) = lu(a);
    let mut out = Array2::zeros(b.dim());
    for col in 0..b.ncols() {
        let mut y: Vec<f64> = perm.iter().map(|&i| b[[i, col]]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] -= m[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= m[i][j] * y[j];
            }
            y[i] /= m[i][i];
        }
        for i in 0..n {
            out[[i, col]] = y[i];
        }
    }
    out
}

pub fn inverse(a: &Array2<f64>) -> Array2<f64> {
    solve(a, &Array2::eye(a.nrows()))
}

/// `(sign, ln|det A|)`.
pub fn logdet(a: &Array2<f64>) -> (f64, f64) {
    let (m, _, mut sign) = lu(a);
    let mut ld = 0.0;
    for (i, row) in m.iter().enumerate() {
        let d = row[i];
        if d == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if d < 0.0 {
            sign = -sign;
        }
        ld += d.abs().ln();
    }
    (sign, ld)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(a: &Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[[i, j]] * m[[i, j]])
            .sum();
        let scale: f64 = m.iter().map(|v| v * v).sum();
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[[p, q]];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[[k, p]], m[[k, q]]);
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[[p, k]], m[[q, k]]);
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| m[[i, i]]).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Largest singular value via the eigenvalues of `DᵀD`.
pub fn spectral_norm(d: &Array2<f64>) -> f64 {
    let dtd = matmul(&d.t().to_owned(), d);
    jacobi_eigenvalues(&dtd)
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
        .sqrt()
}

/// The four loss displays evaluated literally, with `Σ = Ω⁻¹` formed by
/// elimination. Returns `(loss1, loss2, loss3, loss4)`; loss3 is `None` when
/// the estimate is not positive definite.
pub fn brute_losses(omega: &Array2<f64>, est: &Array2<f64>) -> (f64, f64, Option<f64>, f64) {
    let p = omega.nrows() as f64;
    let sigma = inverse(omega);
    let d = omega - est;
    let loss1 = d.iter().map(|v| v * v).sum::<f64>().sqrt() / p.sqrt();
    let loss2 = spectral_norm(&d);
    let sym = (est + &est.t()) * 0.5;
    let pd = jacobi_eigenvalues(&sym)[0] > 0.0;
    let se = matmul(&sigma, est);
    let tr_se: f64 = (0..omega.nrows()).map(|i| se[[i, i]]).sum();
    let loss3 = pd.then(|| {
        let (_, ld) = logdet(&se);
        ((tr_se - ld - p) / p).max(0.0).sqrt()
    });
    let ete = matmul(&est.t().to_owned(), &se);
    let tr_ete: f64 = (0..omega.nrows()).map(|i| ete[[i, i]]).sum();
    let tr_est: f64 = (0..omega.nrows()).map(|i| est[[i, i]]).sum();
    let tr_om: f64 = (0..omega.nrows()).map(|i| omega[[i, i]]).sum();
    let loss4 = ((tr_ete / 2.0 - tr_est + tr_om / 2.0) / p).max(0.0).sqrt();
    (loss1, loss2, loss3, loss4)
}

/// Vectorised Hessian of the smooth loss: `I⊗S` for the asymmetric loss,
/// `½(I⊗S + S⊗I)` for the symmetric one.
pub fn vec_hessian(s: &Array2<f64>, symmetric: bool) -> Array2<f64> {
    let eye = Array2::eye(s.nrows());
    if symmetric {
        (kron(&eye, s) + kron(s, &eye)) * 0.5
    } else {
        kron(&eye, s)
    }
}

/// Dense solve of the ridge system `(H + ρI) vec Ω = vec C`.
pub fn dense_ridge_solve(
    s: &Array2<f64>,
    c: &Array2<f64>,
    rho: f64,
    symmetric: bool,
) -> Array2<f64> {
    let p = s.nrows();
    let h = vec_hessian(s, symmetric) + Array2::<f64>::eye(p * p) * rho;
    let rhs = Array2::from_shape_vec((p * p, 1), vec_cols(c)).unwrap();
    let x = solve(&h, &rhs);
    unvec_cols(x.as_slice().unwrap(), p, p)
}

/// Objective `½ωᵀHω − vec(I)ᵀω + Σ levels_k |ω_k|` in vectorised form.
pub fn vec_objective(h: &Array2<f64>, x: &[f64], eye: &[f64], levels: &[f64]) -> f64 {
    let n = x.len();
    let mut quad = 0.0;
    for i in 0..n {
        let mut hx = 0.0;
        for j in 0..n {
            hx += h[[i, j]] * x[j];
        }
        quad += x[i] * hx;
    }
    let lin: f64 = x.iter().zip(eye).map(|(a, b)| a * b).sum();
    let pen: f64 = x.iter().zip(levels).map(|(a, l)| l * a.abs()).sum();
    0.5 * quad - lin + pen
}

/// FISTA with gradient-based adaptive restart on the vectorised problem.
/// Stops once the proximal-gradient mapping `(y − x⁺)/step` is below 1e-11
/// in max norm, i.e. at a near-exact first-order stationary point. Returns
/// the minimiser (as a matrix) and the objective value.
pub fn fista(s: &Array2<f64>, levels: &Array2<f64>, symmetric: bool) -> (Array2<f64>, f64) {
    let p = s.nrows();
    let n = p * p;
    let h = vec_hessian(s, symmetric);
    let lip = jacobi_eigenvalues(&h).last().copied().unwrap().max(1e-12);
    let step = 1.0 / lip;
    let eye = vec_cols(&Array2::eye(p));
    let lv = vec_cols(levels);
    let mut x = eye.clone();
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut grad = vec![0.0; n];
    for _ in 0..1_000_000 {
        for i in 0..n {
            let row = h.row(i);
            grad[i] = row.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() - eye[i];
        }
        let x_new: Vec<f64> = (0..n)
            .map(|i| {
                let z = y[i] - step * grad[i];
                let th = step * lv[i];
                z.signum() * (z.abs() - th).max(0.0)
            })
            .collect();
        let mapping = (0..n).map(|i| (y[i] - x_new[i]).abs()).fold(0.0, f64::max) / step;
        if mapping < 1e-11 {
            x = x_new;
            break;
        }
        // restart when the momentum direction opposes the gradient mapping
        let dot: f64 = (0..n).map(|i| (y[i] - x_new[i]) * (x_new[i] - x[i])).sum();
        let t_new = if dot > 0.0 {
            1.0
        } else {
            (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0
        };
        let beta = if dot > 0.0 { 0.0 } else { (t - 1.0) / t_new };
        y = (0..n)
            .map(|i| x_new[i] + beta * (x_new[i] - x[i]))
            .collect();
        x = x_new;
        t = t_new;
    }
    let obj = vec_objective(&h, &x, &eye, &lv);
    (unvec_cols(&x, p, p), obj)
}
