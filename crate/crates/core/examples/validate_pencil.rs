//! Checks whether a pencil family cuts out a distinguished variety.

use gammalab::corpus::corpus;
use gammalab::gamma_geom::DEFAULT_TOL;
use gammalab::numerics::CMatrix;
use gammalab::variety::{validate_pencil, DiscGrid, PencilFamily, Verdict};

fn report(name: &str, pf: &PencilFamily, grid: &DiscGrid) {
    let r = validate_pencil(pf, grid, DEFAULT_TOL);
    let margin = r.containment.as_ref().map_or(f64::NAN, |c| c.min_margin);
    let worst = r.boundary.as_ref().map_or(f64::NAN, |b| b.worst_relation);
    print!(
        "{name:<22} n={} d={}  {:<12} min margin {margin:+.3e}  boundary relation {worst:.1e}",
        r.n,
        r.d,
        r.verdict.label()
    );
    match &r.verdict {
        Verdict::Invalid { reason, .. } => print!("\n    {reason}"),
        Verdict::Inconclusive { reason } => print!("\n    {reason}"),
        Verdict::Valid => {}
    }
    println!();
}

fn main() -> gammalab::Result<()> {
    let grid = DiscGrid::new(16, 48);
    for e in corpus() {
        report(e.name, &e.pencil, &grid);
    }
    // numerical radius above one: the fiber over p = 0 already leaves the domain
    report(
        "scalar 1.5",
        &PencilFamily::new(vec![CMatrix::from_real(1, 1, &[1.5])])?,
        &grid,
    );
    // non-commuting pair for n = 3
    let a = CMatrix::from_real(2, 2, &[0.0, 0.3, 0.0, 0.0]);
    report(
        "non-commuting",
        &PencilFamily::new(vec![a.clone(), a.adjoint()])?,
        &grid,
    );
    Ok(())
}
