//! Pushes a three-variable variety forward to two variables and checks the
//! images against the variety of the averaged matrix.

use gammalab::corpus::corpus;
use gammalab::gamma_geom::{classify_point, symmetrize, DEFAULT_TOL};
use gammalab::interplay::{project32, pushforward_variety_on};
use gammalab::numerics::C64;
use gammalab::variety::DiscGrid;

fn show(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:.4}", z)).collect();
    format!("({})", parts.join(", "))
}

fn main() -> gammalab::Result<()> {
    for e in corpus().into_iter().filter(|e| e.pencil.n() == 3) {
        let r = pushforward_variety_on(&e.pencil, &DiscGrid::new(12, 48), 0)?;
        println!(
            "{:<22} w(A) {:.4}  g2 {:<8} images {:>4}  mismatch {:.1e}  pass {}",
            e.name,
            r.omega,
            r.g2.check.verdict.label(),
            r.images.points,
            r.images.max_mismatch,
            r.images.pass
        );
    }

    // the point map itself, on a unimodular ω
    let x = symmetrize(&[C64::new(0.2, 0.5), C64::new(-0.6, 0.1), C64::new(0.3, -0.3)])?;
    for k in 0..4 {
        let w = C64::from_polar(1.0, 1.1 * k as f64);
        let y = project32(&x, w)?;
        println!(
            "ω = {w:.3}  image {}  {}",
            show(&y.coords()),
            classify_point(&y, DEFAULT_TOL).label
        );
    }
    Ok(())
}
