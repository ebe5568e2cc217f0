//! Numerical radius, spectral radius and polynomial roots on small matrices.

use gammalab::numerics::{
    eigenvalues, numerical_radius, operator_norm, poly_roots, spectral_radius, CMatrix, C64,
};

fn show(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:.4}", z)).collect();
    format!("({})", parts.join(", "))
}

fn main() -> gammalab::Result<()> {
    let nil = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let rot = CMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let jordan = CMatrix::from_real(3, 3, &[0.5, 1.0, 0.0, 0.0, 0.5, 1.0, 0.0, 0.0, 0.5]);
    for (name, m) in [
        ("nilpotent", &nil),
        ("rotation", &rot),
        ("jordan(0.5)", &jordan),
    ] {
        println!(
            "{name:<12} rho {:.6}  w {:.6}  ||.|| {:.6}",
            spectral_radius(m)?,
            numerical_radius(m, 1024)?,
            operator_norm(m)
        );
    }
    // w(N) = 1/2 for the 2x2 nilpotent; w <= ||.|| <= 2w in general

    println!("eig(jordan) = {}", show(&eigenvalues(&jordan)?));

    // (t - 1)(t - i)(t + 2), highest degree first
    let coeffs = [
        C64::new(1.0, 0.0),
        C64::new(1.0, -1.0),
        C64::new(-2.0, -1.0),
        C64::new(0.0, 2.0),
    ];
    println!("roots = {}", show(&poly_roots(&coeffs, false)?));
    Ok(())
}
