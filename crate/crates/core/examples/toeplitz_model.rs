//! Truncated Toeplitz model of a pencil, its compression, and the dilation identity.

use gammalab::corpus::corpus;
use gammalab::op_theory::{
    build_model, compress_model, coordinate_inclusion, dilation_check, isometry_relations_check,
};

fn main() -> gammalab::Result<()> {
    for e in corpus().into_iter().filter(|e| e.pencil.d() > 1) {
        let m = build_model(&e.pencil, 6)?;
        let iso = isometry_relations_check(&m);
        let t = compress_model(&m, 4)?;
        let embed = coordinate_inclusion(m.dim(), t.dim());
        let dil = dilation_check(&t, &m, &embed, 4)?;
        println!(
            "{:<22} dim {:>2}  commutators {:.1e}  isometry defect {:.1e} (last block {:.2})  \
             dilation {:.1e} over {} monomials",
            e.name,
            m.dim(),
            m.commutation_residual,
            iso.restricted.iter().copied().fold(0.0, f64::max),
            iso.full.iter().copied().fold(0.0, f64::max),
            dil.max_residual,
            dil.monomials
        );
    }
    Ok(())
}
