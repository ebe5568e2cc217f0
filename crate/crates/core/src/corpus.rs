//! A fixed set of pencils that pass [`validate_pencil`](crate::variety::validate_pencil),
//! used by the examples and the acceptance tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{numerical_radius, CMatrix, C64};
use crate::variety::PencilFamily;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn nil2() -> CMatrix {
    CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])
}

/// Random `d x d` matrix rescaled to numerical radius `w`.
fn random_with_radius(d: usize, w: f64, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = CMatrix::random(d, d, &mut rng);
    let r = numerical_radius(&m, 512).expect("square");
    m.scale_real(w / r)
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub pencil: PencilFamily,
}

pub fn corpus() -> Vec<CorpusEntry> {
    let diag = |v: &[C64]| CMatrix::from_diag(v);
    let e = |name, f: Vec<CMatrix>| CorpusEntry {
        name,
        pencil: PencilFamily::new(f).expect("corpus shapes"),
    };
    vec![
        e("g2-scalar-real", vec![CMatrix::scalar(c(0.5, 0.0))]),
        e("g2-scalar-complex", vec![CMatrix::scalar(c(0.3, 0.4))]),
        e("g2-nilpotent", vec![nil2()]),
        e(
            "g2-diagonal",
            vec![diag(&[c(0.2, 0.0), c(0.0, -0.5), c(0.6, 0.3)])],
        ),
        e("g2-random-3", vec![random_with_radius(3, 0.45, 11)]),
        e("g2-random-2", vec![random_with_radius(2, 0.8, 12)]),
        e("g3-zero", vec![CMatrix::zeros(1, 1), CMatrix::zeros(1, 1)]),
        e(
            "g3-scalars",
            vec![CMatrix::scalar(c(0.5, 0.0)), CMatrix::scalar(c(0.4, 0.0))],
        ),
        e(
            "g3-diagonal",
            vec![
                diag(&[c(0.3, 0.0), c(-0.2, 0.1)]),
                diag(&[c(0.0, 0.1), c(0.4, 0.0)]),
            ],
        ),
        e("g3-nilpotent", vec![nil2(), nil2()]),
        e(
            "g3-nilpotent-twisted",
            vec![nil2(), nil2().scale(c(0.0, 1.0))],
        ),
        e(
            "g3-diagonal-3",
            vec![
                diag(&[c(0.1, 0.2), c(-0.4, 0.0), c(0.0, 0.3)]),
                diag(&[c(0.3, 0.0), c(0.2, -0.2), c(-0.1, 0.0)]),
            ],
        ),
    ]
}
