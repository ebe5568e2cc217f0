//! Two-variable varieties from a single matrix, under both adjoint conventions.

use gammalab::corpus::corpus;
use gammalab::numerics::{CMatrix, C64};
use gammalab::variety::{g2_variety_from_matrix, AdjointConvention};

fn main() -> gammalab::Result<()> {
    let mut mats = vec![
        (
            "0.9 * rotation",
            CMatrix::from_real(2, 2, &[0.0, -0.9, 0.9, 0.0]),
        ),
        (
            "2x2 nilpotent x 2",
            CMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]),
        ),
        (
            "2x2 nilpotent x 2.2",
            CMatrix::from_real(2, 2, &[0.0, 2.2, 0.0, 0.0]),
        ),
        ("i/2", CMatrix::scalar(C64::new(0.0, 0.5))),
    ];
    mats.extend(
        corpus()
            .into_iter()
            .filter(|e| e.pencil.n() == 2)
            .map(|e| (e.name, e.pencil.f(1).clone())),
    );
    for (name, a) in &mats {
        for conv in [
            AdjointConvention::APlusPAStar,
            AdjointConvention::AStarPlusPA,
        ] {
            let g = g2_variety_from_matrix(a, conv)?;
            println!(
                "{name:<22} {conv:<12?} w(A) {:.4}  {}",
                g.omega,
                g.check.verdict.label()
            );
        }
    }
    Ok(())
}
