//! Membership tests for a handful of points, plus the closed-form check for n = 2.

use gammalab::gamma_geom::{ay_criterion, classify_point, symmetrize, GammaPoint, DEFAULT_TOL};
use gammalab::numerics::C64;

fn main() -> gammalab::Result<()> {
    let c = |re, im| C64::new(re, im);
    let points = [
        (
            "origin, n=3",
            GammaPoint::new(vec![c(0.0, 0.0); 2], c(0.0, 0.0))?,
        ),
        (
            "image of (0.5, -0.3i)",
            symmetrize(&[c(0.5, 0.0), c(0.0, -0.3)])?,
        ),
        (
            "image of a torus point",
            symmetrize(&[C64::from_polar(1.0, 0.4), C64::from_polar(1.0, 2.0)])?,
        ),
        (
            "image of (1, 0.2)",
            symmetrize(&[c(1.0, 0.0), c(0.2, 0.0)])?,
        ),
        (
            "(2, 2.5, 0.5)",
            GammaPoint::new(vec![c(2.0, 0.0), c(2.5, 0.0)], c(0.5, 0.0))?,
        ),
        (
            "(1.9, 0.95)",
            GammaPoint::new(vec![c(1.9, 0.0)], c(0.95, 0.0))?,
        ),
    ];
    for (name, x) in &points {
        let k = classify_point(x, DEFAULT_TOL);
        print!("{name:<26} {:<14} margin {:+.3e}", k.label, k.margin);
        if x.n() == 2 {
            let (inside, slack) = ay_criterion(x.s()[0], x.p());
            print!("   closed form: inside={inside} slack {slack:+.3e}");
        }
        println!();
    }
    Ok(())
}
