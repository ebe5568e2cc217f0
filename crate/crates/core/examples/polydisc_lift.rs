//! Lifts a sampled variety to the polydisc: interior points land strictly
//! inside, boundary points on the torus.

use gammalab::corpus::corpus;
use gammalab::gamma_geom::PointLabel;
use gammalab::variety::{polydisc_sample, DiscGrid};

fn main() -> gammalab::Result<()> {
    for e in corpus() {
        let pts = polydisc_sample(&e.pencil, &DiscGrid::new(10, 32))?;
        let interior_max = pts
            .iter()
            .filter(|q| q.class == PointLabel::Interior)
            .map(|q| q.max_modulus)
            .fold(0.0, f64::max);
        let torus_dev = pts
            .iter()
            .filter(|q| q.class == PointLabel::Distinguished)
            .map(|q| (q.max_modulus - 1.0).abs().max((q.min_modulus - 1.0).abs()))
            .fold(0.0, f64::max);
        let resym = pts.iter().map(|q| q.resym_residual).fold(0.0, f64::max);
        let bad = pts.iter().filter(|q| !q.consistent).count();
        println!(
            "{:<22} max |z| inside {interior_max:.4}  torus deviation {torus_dev:.1e}  \
             resym {resym:.1e}  inconsistent {bad}",
            e.name
        );
    }
    Ok(())
}
