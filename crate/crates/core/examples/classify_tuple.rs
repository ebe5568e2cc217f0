//! Sorts operator tuples into unitary, isometric, contractive or refuted.

use gammalab::corpus::corpus;
use gammalab::gamma_geom::elementary_symmetric;
use gammalab::numerics::{CMatrix, C64};
use gammalab::op_theory::{build_model, classify_tuple, compress_model, Evidence, OperatorTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Symmetrization of `n` commuting normal matrices `U diag(z_j) U^*`.
fn from_diagonals(zs: &[Vec<C64>], u: &CMatrix) -> gammalab::Result<OperatorTuple> {
    let m = zs.len();
    let n = zs[0].len();
    let e: Vec<Vec<C64>> = zs.iter().map(|z| elementary_symmetric(z)).collect();
    let conj = |k: usize| {
        let d = CMatrix::from_diag(&(0..m).map(|r| e[r][k]).collect::<Vec<_>>());
        &(u * &d) * &u.adjoint()
    };
    OperatorTuple::new((0..n - 1).map(conj).collect(), conj(n - 1))
}

fn main() -> gammalab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = CMatrix::random_unitary(3, &mut rng);
    let on_torus: Vec<Vec<C64>> = (0..3)
        .map(|r| {
            (0..3)
                .map(|j| C64::from_polar(1.0, 0.7 * r as f64 + 1.3 * j as f64))
                .collect()
        })
        .collect();
    let inside: Vec<Vec<C64>> = on_torus
        .iter()
        .map(|z| z.iter().map(|w| w * 0.6).collect())
        .collect();
    let outside: Vec<Vec<C64>> = on_torus
        .iter()
        .map(|z| z.iter().map(|w| w * 1.2).collect())
        .collect();

    let nil = corpus()
        .into_iter()
        .find(|e| e.name == "g3-nilpotent")
        .unwrap();
    let cases = [
        ("torus diagonal", from_diagonals(&on_torus, &u)?),
        ("scaled diagonal", from_diagonals(&inside, &u)?),
        ("outside diagonal", from_diagonals(&outside, &u)?),
        (
            "model compression",
            compress_model(&build_model(&nil.pencil, 5)?, 3)?,
        ),
    ];
    let ev = Evidence {
        trials: 8,
        ..Default::default()
    };
    for (name, t) in &cases {
        let c = classify_tuple(t, &ev);
        println!(
            "{name:<18} {:<21} normal {}  |P*P - I| {:.1e}  relation {:.1e}",
            c.label, c.normal, c.isometry_defect, c.relation_defect
        );
        if let Some(w) = &c.witness {
            println!("    witness {}", serde_json::to_string(w)?);
        }
    }
    Ok(())
}
