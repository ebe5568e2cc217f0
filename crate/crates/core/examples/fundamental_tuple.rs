//! Recovers the fundamental operator tuple of a compressed model and its
//! numerical radius bounds.

use gammalab::corpus::corpus;
use gammalab::numerics::operator_norm;
use gammalab::op_theory::{build_model, compress_model, fo_tuple, FO_RANK_TOL};

fn main() -> gammalab::Result<()> {
    for e in corpus() {
        let t = compress_model(&build_model(&e.pencil, 5)?, 4)?;
        let fo = fo_tuple(&t, FO_RANK_TOL)?;
        // the compression's defect space is the last block, where A_i = F_i^*
        let recovered = (1..fo.n)
            .map(|i| operator_norm(&(&fo.a[i - 1] - &e.pencil.f(i).adjoint())))
            .fold(0.0, f64::max);
        let omegas: Vec<String> = fo
            .omega_report
            .iter()
            .map(|o| format!("{:.3}/{}", o.max_omega, o.bound))
            .collect();
        println!(
            "{:<22} rank {}  solved {}  |A - F*| {recovered:.1e}  w(A_i + A_(n-i) z) {}",
            e.name,
            fo.rank,
            fo.solved,
            omegas.join(" ")
        );
    }
    Ok(())
}
