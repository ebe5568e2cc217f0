//! Symmetrization, its inverse, and the canonical reduction to one variable fewer.

use gammalab::gamma_geom::{canonical_c_with_residual, desymmetrize, symmetrize, DEFAULT_TOL};
use gammalab::numerics::C64;

fn show(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:.4}", z)).collect();
    format!("({})", parts.join(", "))
}

fn main() -> gammalab::Result<()> {
    let z = [C64::new(0.3, 0.4), C64::new(-0.5, 0.1), C64::new(0.0, -0.7)];
    let x = symmetrize(&z)?;
    println!("z      = {}", show(&z));
    println!("s      = {}", show(x.s()));
    println!("p      = {:.4}", x.p());

    let back = desymmetrize(&x)?;
    let resym = symmetrize(&back)?;
    let err = x
        .coords()
        .iter()
        .zip(resym.coords())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("roots  = {}", show(&back));
    println!("re-symmetrized error {err:.2e}");

    // c(x) lives one dimension down and is inside iff x is
    let (cx, res) = canonical_c_with_residual(&x, DEFAULT_TOL)?;
    println!("c(x)   = {}  (residual {res:.1e})", show(&cx));
    Ok(())
}
