//! Dense complex linear algebra used throughout the crate.

mod hermitian;
mod lu;
mod matrix;
mod poly;
mod radius;
mod schur;

pub use hermitian::{
    hermitian_eigen, hermitian_part, hermitian_sqrt_and_pinv, lambda_max, operator_norm,
    HermitianEigen, SqrtPinv,
};
pub use lu::{det, inverse, Lu};
pub use matrix::{inner, norm2, CMatrix, C64, ONE, ZERO};
pub use poly::{horner, poly_roots};
pub use radius::{numerical_radius, rotated_real_part_max};
pub use schur::{eigenvalues, schur, SchurResult, DEFLATION_REL};

/// Spectral radius.
pub fn spectral_radius(m: &CMatrix) -> crate::Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `‖m m^* - m^* m‖_F`.
pub fn normality_defect(m: &CMatrix) -> f64 {
    (&(m * &m.adjoint()) - &(&m.adjoint() * m)).frobenius_norm()
}

/// Smallest distance-sum matching between two multisets of points in C^k.
/// Returns the largest pairwise distance in the best matching found (exact
/// assignment up to 8 points, greedy beyond).
pub fn multiset_distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let dist = |x: &Vec<C64>, y: &Vec<C64>| -> f64 {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max)
    };
    let n = a.len();
    if n <= 8 {
        let mut idx: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut idx, 0, &mut |perm| {
            let worst = (0..n).map(|i| dist(&a[i], &b[perm[i]])).fold(0.0, f64::max);
            if worst < best {
                best = worst;
            }
        });
        if n == 0 {
            0.0
        } else {
            best
        }
    } else {
        let mut used = vec![false; n];
        let mut worst: f64 = 0.0;
        for x in a {
            let (j, d) = (0..n)
                .filter(|&j| !used[j])
                .map(|j| (j, dist(x, &b[j])))
                .min_by(|u, v| u.1.total_cmp(&v.1))
                .expect("sizes agree");
            used[j] = true;
            worst = worst.max(d);
        }
        worst
    }
}

fn permute(idx: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        visit(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, visit);
        idx.swap(k, i);
    }
}
