//! Finds a defining polynomial that vanishes on the variety but not at a given point.

use gammalab::gamma_geom::{symmetrize, GammaPoint};
use gammalab::numerics::{CMatrix, C64};
use gammalab::variety::{fiber, separating_poly, PencilFamily};

fn main() -> gammalab::Result<()> {
    let pf = PencilFamily::new(vec![
        CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]),
        CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]),
    ])?;
    let p = C64::new(0.3, -0.2);
    let on = GammaPoint::new(fiber(&pf, p, 0)?[0].clone(), p)?;
    let off = symmetrize(&[C64::new(0.5, 0.0), C64::new(-0.2, 0.1), C64::new(0.0, 0.4)])?;
    for (name, x) in [("fiber point", &on), ("generic point", &off)] {
        println!("{name:<14} {:?}", separating_poly(&pf, x, 1e-8)?);
    }
    Ok(())
}
