//! Complex Schur factorization: Householder reduction to Hessenberg form
//! followed by single-shift QR sweeps with Wilkinson shifts.

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// `unitary * triangular * unitary^* = input`.
#[derive(Clone, Debug)]
pub struct SchurResult {
    pub unitary: CMatrix,
    pub triangular: CMatrix,
    pub eigenvalues: Vec<C64>,
    pub residual: f64,
}

/// Relative deflation threshold on subdiagonal entries.
pub const DEFLATION_REL: f64 = 1e-13;

pub fn schur(m: &CMatrix, _tol: f64) -> Result<SchurResult> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    let norm = m.frobenius_norm();
    let mut h = m.clone();
    let mut q = CMatrix::identity(n);
    if n == 0 {
        return Ok(SchurResult {
            unitary: q,
            triangular: h,
            eigenvalues: vec![],
            residual: 0.0,
        });
    }
    hessenberg(&mut h, &mut q);

    let budget = 100 * n;
    let small_abs = DEFLATION_REL * norm;
    let mut hi = n - 1;
    let mut iterations = 0usize;
    let mut since_deflation = 0usize;

    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * local || sub <= small_abs {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if iterations >= budget {
            let residual = reconstruction_residual(m, &q, &h);
            let eigenvalues = h.diag();
            return Err(Error::NoConvergence {
                iterations,
                unconverged: hi + 1,
                partial: Box::new(SchurResult {
                    unitary: q,
                    triangular: h,
                    eigenvalues,
                    residual,
                }),
            });
        }
        iterations += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(&mut h, &mut q, lo, hi, shift);
    }

    // Clean the strict lower triangle; remaining mass is below the deflation threshold.
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    let residual = reconstruction_residual(m, &q, &h);
    let eigenvalues = h.diag();
    Ok(SchurResult {
        unitary: q,
        triangular: h,
        eigenvalues,
        residual,
    })
}

/// Eigenvalues only.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    Ok(schur(m, 0.0)?.eigenvalues)
}

fn reconstruction_residual(m: &CMatrix, q: &CMatrix, t: &CMatrix) -> f64 {
    let back = &(q * t) * &q.adjoint();
    (&back - m).frobenius_norm()
}

fn hessenberg(h: &mut CMatrix, q: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = super::matrix::norm2(&x);
        if xnorm == 0.0 {
            continue;
        }
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vn = super::matrix::norm2(&v);
        for z in &mut v {
            *z /= vn;
        }
        // H <- (I - 2vv^*) H
        for j in 0..n {
            let mut dot = ZERO;
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + t, j)];
            }
            dot *= 2.0;
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * dot;
            }
        }
        // H <- H (I - 2vv^*), Q <- Q (I - 2vv^*)
        for mat in [&mut *h, &mut *q] {
            for i in 0..n {
                let mut dot = ZERO;
                for (t, vi) in v.iter().enumerate() {
                    dot += mat[(i, k + 1 + t)] * vi;
                }
                dot *= 2.0;
                for (t, vi) in v.iter().enumerate() {
                    mat[(i, k + 1 + t)] -= dot * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let mu1 = tr + disc;
    let mu2 = tr - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let nrm = an.hypot(bn);
    let c = an / nrm;
    let s = (a / an) * b.conj() / nrm;
    (c, s)
}

fn rotate_rows(h: &mut CMatrix, k: usize, c: f64, s: C64, cols: std::ops::Range<usize>) {
    for j in cols {
        let u = h[(k, j)];
        let v = h[(k + 1, j)];
        h[(k, j)] = u * c + s * v;
        h[(k + 1, j)] = -s.conj() * u + v * c;
    }
}

fn rotate_cols(h: &mut CMatrix, k: usize, c: f64, s: C64, rows: std::ops::Range<usize>) {
    for i in rows {
        let u = h[(i, k)];
        let v = h[(i, k + 1)];
        h[(i, k)] = u * c + v * s.conj();
        h[(i, k + 1)] = -u * s + v * c;
    }
}

/// One implicit single-shift QR sweep on the active window `lo..=hi`, applied to
/// the full matrix so that the final iterate is a Schur form.
fn qr_sweep(h: &mut CMatrix, q: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    let n = h.rows();
    let (c, s) = givens(h[(lo, lo)] - shift, h[(lo + 1, lo)]);
    rotate_rows(h, lo, c, s, lo..n);
    rotate_cols(h, lo, c, s, 0..(lo + 3).min(hi + 1));
    rotate_cols(q, lo, c, s, 0..n);
    for k in lo + 1..hi {
        let (c, s) = givens(h[(k, k - 1)], h[(k + 1, k - 1)]);
        rotate_rows(h, k, c, s, k - 1..n);
        h[(k + 1, k - 1)] = ZERO;
        rotate_cols(h, k, c, s, 0..(k + 3).min(hi + 1));
        rotate_cols(q, k, c, s, 0..n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::ONE;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sorted_re(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn identity() {
        let r = schur(&CMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(r.eigenvalues, vec![ONE; 3]);
        assert!((&r.triangular - &CMatrix::identity(3)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn diagonal() {
        let m = CMatrix::from_diag(&[C64::new(2.0, 0.0), C64::new(0.0, 3.0)]);
        let ev = sorted_re(schur(&m, 1e-12).unwrap().eigenvalues);
        assert!((ev[0] - C64::new(0.0, 3.0)).norm() < 1e-14);
        assert!((ev[1] - C64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn companion_of_quadratic() {
        // t^2 - 3t + 2; quadratic formula gives (3 ± 1)/2
        let m = CMatrix::from_real(2, 2, &[3.0, -2.0, 1.0, 0.0]);
        let ev = sorted_re(schur(&m, 1e-12).unwrap().eigenvalues);
        let disc: f64 = 9.0 - 8.0;
        let oracle = [(3.0 - disc.sqrt()) / 2.0, (3.0 + disc.sqrt()) / 2.0];
        for (e, o) in ev.iter().zip(oracle) {
            assert!((e - C64::new(o, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=16 {
            let m = CMatrix::random(n, n, &mut rng);
            let r = schur(&m, 1e-12).unwrap();
            let norm = m.frobenius_norm();
            assert!(r.residual <= 1e-10 * norm, "n={n} residual {}", r.residual);
            let qq = &(&r.unitary.adjoint() * &r.unitary) - &CMatrix::identity(n);
            assert!(qq.frobenius_norm() < 1e-12);
            assert_eq!(r.triangular.strict_lower_norm(), 0.0);
        }
    }

    #[test]
    fn jordan_block_is_left_alone() {
        let mut j = CMatrix::identity(4).scale(C64::new(0.5, 0.5));
        for i in 0..3 {
            j[(i, i + 1)] = ONE;
        }
        let r = schur(&j, 1e-12).unwrap();
        for e in r.eigenvalues {
            assert!((e - C64::new(0.5, 0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn real_rotation_has_complex_pair() {
        let m = CMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let ev = schur(&m, 1e-12).unwrap().eigenvalues;
        let mut im: Vec<f64> = ev.iter().map(|z| z.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 1.0).abs() < 1e-13 && (im[1] - 1.0).abs() < 1e-13);
    }
}
