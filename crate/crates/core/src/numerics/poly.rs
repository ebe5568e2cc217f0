use super::matrix::{CMatrix, C64, ONE, ZERO};
use super::schur::eigenvalues;
use crate::error::{Error, Result};

/// Horner evaluation, coefficients highest degree first.
pub fn horner(coeffs: &[C64], t: C64) -> C64 {
    coeffs.iter().fold(ZERO, |acc, &c| acc * t + c)
}

/// All roots with multiplicity, as eigenvalues of the companion matrix.
///
/// Coefficients are given highest degree first. With `monic` set the leading
/// 1 is implied and `coeffs` holds the remaining `n` coefficients of
/// `t^n + c[0] t^(n-1) + ... + c[n-1]`; otherwise leading zeros are stripped.
/// Isolated roots are polished with a few Newton steps on the original polynomial.
pub fn poly_roots(coeffs: &[C64], monic: bool) -> Result<Vec<C64>> {
    let full: Vec<C64> = if monic {
        std::iter::once(ONE).chain(coeffs.iter().copied()).collect()
    } else {
        let first = coeffs
            .iter()
            .position(|c| *c != ZERO)
            .ok_or(Error::ZeroPolynomial)?;
        coeffs[first..].to_vec()
    };
    let n = full.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = full[0];
    let mut comp = CMatrix::zeros(n, n);
    for j in 0..n {
        comp[(0, j)] = -full[j + 1] / lead;
    }
    for i in 1..n {
        comp[(i, i - 1)] = ONE;
    }
    let mut roots = eigenvalues(&comp)?;
    let deriv: Vec<C64> = full[..n]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (n - k) as f64)
        .collect();
    let originals = roots.clone();
    for (k, r) in roots.iter_mut().enumerate() {
        // Clustered roots are left alone: moving them independently destroys
        // the cancellation that keeps their symmetric functions accurate.
        let isolated = originals
            .iter()
            .enumerate()
            .all(|(j, o)| j == k || (o - *r).norm() > 1e-4 * (1.0 + r.norm()));
        if !isolated {
            continue;
        }
        let mut val = horner(&full, *r).norm();
        for _ in 0..3 {
            let d = horner(&deriv, *r);
            if d.norm() == 0.0 {
                break;
            }
            let cand = *r - horner(&full, *r) / d;
            let cv = horner(&full, cand).norm();
            if cand.re.is_finite() && cand.im.is_finite() && cv < val {
                *r = cand;
                val = cv;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}
