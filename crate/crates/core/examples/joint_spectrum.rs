//! Joint eigenvalues of a commuting tuple built as polynomials in one matrix.

use gammalab::joint_spectrum::{joint_eigs, joint_eigs_oracle, MatrixTuple};
use gammalab::numerics::{inverse, multiset_distance, CMatrix, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:.4}", z)).collect();
    format!("({})", parts.join(", "))
}

fn main() -> gammalab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // upper triangular core with distinct diagonal, conjugated by a random similarity
    let mut u = CMatrix::random(4, 4, &mut rng).scale_real(0.2);
    for i in 0..4 {
        for j in 0..i {
            u[(i, j)] = C64::new(0.0, 0.0);
        }
        u[(i, i)] = C64::new(i as f64 * 0.3 - 0.4, 0.1 * i as f64);
    }
    let g = &CMatrix::identity(4) + &CMatrix::random(4, 4, &mut rng).scale_real(0.3);
    let gi = inverse(&g)?;
    let conj = |m: &CMatrix| &(&g * m) * &gi;

    let u2 = &u * &u;
    let t = MatrixTuple::new(vec![conj(&u), conj(&u2), conj(&(&u2 - &u))])?;
    let js = joint_eigs(&t, 0)?;
    for (pt, r) in js.points.iter().zip(&js.residuals) {
        println!("{}  residual {r:.1e}", show(pt));
    }

    let expected: Vec<Vec<C64>> = u
        .diag()
        .iter()
        .map(|&l| vec![l, l * l, l * l - l])
        .collect();
    println!(
        "distance to expected  {:.2e}",
        multiset_distance(&js.points, &expected)
    );
    println!(
        "distance to oracle    {:.2e}",
        multiset_distance(&js.points, &joint_eigs_oracle(&t)?)
    );
    println!("method {:?}", js.method);
    Ok(())
}
