//! Randomized von Neumann test on compressed models, against the two
//! candidate reference varieties built from the fundamental tuple.

use gammalab::corpus::corpus;
use gammalab::op_theory::{build_model, compress_model};
use gammalab::variety::DiscGrid;
use gammalab::vn_check::{vn_experiment, ReferenceVariety, VnConfig};

fn main() -> gammalab::Result<()> {
    let cfg = VnConfig {
        trials: 20,
        max_degree: 3,
        grid: DiscGrid::new(12, 48).with_boundary_refine(4),
        ..Default::default()
    };
    for e in corpus() {
        let t = compress_model(&build_model(&e.pencil, 5)?, 4)?;
        for reference in [ReferenceVariety::Adjoint, ReferenceVariety::Literal] {
            let r = vn_experiment(&t, None, &VnConfig { reference, ..cfg })?;
            println!(
                "{:<22} {reference:<8?} {:<9} violations {:>2}/{}  min margin {:+.3e}",
                e.name,
                r.verdict.as_str(),
                r.violations,
                r.trials.len(),
                r.min_margin
            );
        }
    }
    // for real pencils the two agree; the complex ones show which variety is the right one
    Ok(())
}
