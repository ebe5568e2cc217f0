use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix: `vectors * diag(values) * vectors^*`.
/// Values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    let n = m.require_square()?;
    let mut a = hermitian_part(m);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale == 0.0 || n == 1 {
        return Ok(finish(a, v));
    }
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 || mag <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                for k in 0..n {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    a[(k, p)] = x * u_pp + y * u_qp;
                    a[(k, q)] = x * u_pq + y * u_qq;
                }
                for k in 0..n {
                    let x = a[(p, k)];
                    let y = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * x + u_qp.conj() * y;
                    a[(q, k)] = u_pq.conj() * x + u_qq.conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * u_pp + y * u_qp;
                    v[(k, q)] = x * u_pq + y * u_qq;
                }
            }
        }
    }
    Ok(finish(a, v))
}

fn finish(a: CMatrix, v: CMatrix) -> HermitianEigen {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    HermitianEigen { values, vectors }
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

pub fn lambda_max(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigen(m)?.values.last().copied().unwrap_or(0.0))
}

/// Largest singular value, via the top eigenvalue of `m^* m`.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let g = if m.rows() >= m.cols() {
        &m.adjoint() * m
    } else {
        m * &m.adjoint()
    };
    lambda_max(&g)
        .expect("gram matrix is square")
        .max(0.0)
        .sqrt()
}

/// Square root, pseudo-inverse of the square root, numerical rank and an
/// orthonormal basis of the range of a PSD matrix.
#[derive(Clone, Debug)]
pub struct SqrtPinv {
    pub sqrt: CMatrix,
    pub pinv_of_sqrt: CMatrix,
    pub rank: usize,
    pub range_basis: CMatrix,
}

pub fn hermitian_sqrt_and_pinv(m: &CMatrix, rank_tol: f64) -> Result<SqrtPinv> {
    let n = m.require_square()?;
    let asym = (m - &m.adjoint()).frobenius_norm();
    let herm_tol = 1e-8 * (1.0 + m.frobenius_norm()) + rank_tol;
    if asym > herm_tol {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let eig = hermitian_eigen(m)?;
    if let Some(&lo) = eig.values.first() {
        if lo < -rank_tol {
            return Err(Error::NotPsd { eigenvalue: lo });
        }
    }
    let mut sq = vec![0.0; n];
    let mut inv = vec![0.0; n];
    let mut keep = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        let lam = lam.max(0.0);
        sq[k] = lam.sqrt();
        if lam > rank_tol {
            inv[k] = 1.0 / lam.sqrt();
            keep.push(k);
        }
    }
    let v = &eig.vectors;
    let recombine = |d: &[f64]| {
        let mut scaled = v.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= d[j];
            }
        }
        &scaled * &v.adjoint()
    };
    Ok(SqrtPinv {
        sqrt: recombine(&sq),
        pinv_of_sqrt: recombine(&inv),
        rank: keep.len(),
        range_basis: v.select_columns(&keep),
    })
}
