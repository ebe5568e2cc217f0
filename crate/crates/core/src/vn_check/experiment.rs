use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{random_poly, refine_boundary_sup, sampled_sup};
use crate::error::{Error, Result};
use crate::gamma_geom::DEFAULT_TOL;
use crate::numerics::{operator_norm, spectral_radius};
use crate::op_theory::{fo_tuple, OperatorTuple, FO_RANK_TOL};
use crate::variety::{sample_variety, validate_pencil, DiscGrid, PencilFamily};

/// Which pencil built from the fundamental tuple `A` bounds the tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceVariety {
    /// `det(A_i + p A_{n-i}^* - s_i I) = 0`; contains the joint spectrum of the tuple.
    Adjoint,
    /// `det(A_i^* + p A_{n-i} - s_i I) = 0`; agrees with `Adjoint` for real `A`.
    Literal,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VnConfig {
    pub trials: usize,
    pub max_degree: usize,
    pub block_order: usize,
    pub grid: DiscGrid,
    /// A trial is a violation when `rhs - lhs < -tol`.
    pub tol: f64,
    pub seed: u64,
    pub override_hypotheses: bool,
    pub reference: ReferenceVariety,
    /// Boundary nodes refined by golden-section search per trial.
    pub refine_top: usize,
}

impl Default for VnConfig {
    fn default() -> Self {
        VnConfig {
            trials: 100,
            max_degree: 4,
            block_order: 1,
            grid: DiscGrid::default().with_boundary_refine(4),
            tol: 1e-6,
            seed: 0,
            override_hypotheses: false,
            reference: ReferenceVariety::Adjoint,
            refine_top: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisGate {
    pub p_spectral_radius: Option<f64>,
    /// `‖P^m‖` with `m` the space dimension.
    pub p_power_norm: f64,
    pub p_star_pure: bool,
    pub defect_dim: usize,
    pub pencil_source: &'static str,
    pub pencil_verdict: &'static str,
    pub passed: bool,
    pub reasons: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TrialVerdict {
    Holds,
    Violation,
}

impl TrialVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            TrialVerdict::Holds => "HOLDS",
            TrialVerdict::Violation => "VIOLATION",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub degree: usize,
    pub block_order: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: TrialVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct VNReport {
    pub n: usize,
    pub dim: usize,
    pub reference: ReferenceVariety,
    pub pencil: PencilFamily,
    pub gate: HypothesisGate,
    /// Set when the gate failed and the run was forced.
    pub exploratory: bool,
    pub grid: DiscGrid,
    pub sample_failures: usize,
    pub tol: f64,
    pub trials: Vec<TrialRecord>,
    pub min_margin: f64,
    pub violations: usize,
    pub verdict: TrialVerdict,
}

impl VNReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,degree,lhs,rhs,margin,verdict\n");
        for t in &self.trials {
            let _ = writeln!(
                out,
                "{},{},{:.17e},{:.17e},{:.6e},{}",
                t.trial,
                t.degree,
                t.lhs,
                t.rhs,
                t.margin,
                t.verdict.as_str()
            );
        }
        out
    }
}

/// Compares `‖f(S, P)‖` with the sampled maximum of `‖f‖` over the closure
/// of the variety for `trials` random polynomials.
///
/// Without `pf` the variety is built from the fundamental tuple of `t`
/// following `cfg.reference`.
pub fn vn_experiment(
    t: &OperatorTuple,
    pf: Option<&PencilFamily>,
    cfg: &VnConfig,
) -> Result<VNReport> {
    let n = t.n();
    let m = t.dim();
    let mut reasons = Vec::new();

    let rho = spectral_radius(t.p()).ok();
    let power = t.p().pow(m).map(|x| operator_norm(&x)).unwrap_or(f64::NAN);
    let pure = power <= 1e-10 || rho.is_some_and(|r| r < 1.0 - 1e-6);
    if !pure {
        reasons.push(format!(
            "P^* is not pure: spectral radius {:?}, ‖P^m‖ = {power:.3e}",
            rho
        ));
    }

    let fo = fo_tuple(t, FO_RANK_TOL);
    let defect_dim = fo.as_ref().map(|f| f.rank).unwrap_or(0);
    let (pencil, source) = match pf {
        Some(p) => (p.clone(), "supplied"),
        None => {
            let fo = fo?;
            let p = match cfg.reference {
                ReferenceVariety::Adjoint => fo.reference_pencil()?,
                ReferenceVariety::Literal => fo.literal_pencil()?,
            };
            (p, "fundamental-tuple")
        }
    };
    if pencil.n() != n {
        return Err(Error::Dimension(format!(
            "pencil has n = {}, tuple has n = {n}",
            pencil.n()
        )));
    }
    let check = validate_pencil(&pencil, &DiscGrid::default(), DEFAULT_TOL);
    if check.verdict.is_invalid() {
        reasons.push(format!("pencil is INVALID: {:?}", check.verdict));
    }
    let gate = HypothesisGate {
        p_spectral_radius: rho,
        p_power_norm: power,
        p_star_pure: pure,
        defect_dim,
        pencil_source: source,
        pencil_verdict: check.verdict.label(),
        passed: reasons.is_empty(),
        reasons,
    };
    if !gate.passed && !cfg.override_hypotheses {
        return Err(Error::HypothesesNotMet(gate.reasons.join("; ")));
    }

    let sample = sample_variety(&pencil, &cfg.grid, cfg.seed)?;
    let comps = t.components();
    let trials: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.seed.wrapping_add(k as u64);
            let f = random_poly(n, cfg.max_degree, cfg.block_order, seed)?;
            let lhs = operator_norm(&f.eval_tuple(&comps)?);
            let rhs = sampled_sup(&f, &sample, false).max(refine_boundary_sup(
                &f,
                &pencil,
                &sample,
                cfg.refine_top,
                cfg.seed,
            ));
            let margin = rhs - lhs;
            Ok(TrialRecord {
                trial: k,
                seed,
                degree: cfg.max_degree,
                block_order: cfg.block_order,
                lhs,
                rhs,
                margin,
                verdict: if margin < -cfg.tol {
                    TrialVerdict::Violation
                } else {
                    TrialVerdict::Holds
                },
            })
        })
        .collect::<Result<_>>()?;
    let violations = trials
        .iter()
        .filter(|r| r.verdict == TrialVerdict::Violation)
        .count();
    let min_margin = trials
        .iter()
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min);
    Ok(VNReport {
        n,
        dim: m,
        reference: cfg.reference,
        pencil,
        exploratory: !gate.passed,
        gate,
        grid: cfg.grid,
        sample_failures: sample.failures(),
        tol: cfg.tol,
        trials,
        min_margin,
        violations,
        verdict: if violations == 0 {
            TrialVerdict::Holds
        } else {
            TrialVerdict::Violation
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{CMatrix, C64};
    use crate::op_theory::{build_model, compress_model};
    use crate::vn_check::MPoly;

    fn compressed(f: CMatrix, k: usize, kp: usize) -> (PencilFamily, OperatorTuple) {
        let pf = PencilFamily::new(vec![f]).unwrap();
        let t = compress_model(&build_model(&pf, k).unwrap(), kp).unwrap();
        (pf, t)
    }

    fn small_cfg() -> VnConfig {
        VnConfig {
            trials: 12,
            max_degree: 3,
            grid: DiscGrid::new(8, 32).with_boundary_refine(4),
            ..Default::default()
        }
    }

    #[test]
    fn scalar_half_holds() {
        let (_, t) = compressed(CMatrix::scalar(C64::new(0.5, 0.0)), 5, 4);
        let r = vn_experiment(&t, None, &small_cfg()).unwrap();
        assert!(r.gate.passed && !r.exploratory);
        assert_eq!(r.violations, 0, "{:?}", r.trials);
        assert!(r.min_margin >= -1e-6);
    }

    #[test]
    fn complex_symbol_uses_the_adjoint_variety() {
        // The tuple sits over s = conj(a) + a p; the other convention misses it.
        let a = C64::new(0.1, 0.4);
        let (pf, t) = compressed(CMatrix::scalar(a), 5, 4);
        let r = vn_experiment(&t, None, &small_cfg()).unwrap();
        assert_eq!(r.violations, 0);
        assert!((r.pencil.f(1)[(0, 0)] - pf.f(1)[(0, 0)]).norm() < 1e-12);
        let lit = VnConfig {
            reference: ReferenceVariety::Literal,
            ..small_cfg()
        };
        let r = vn_experiment(&t, None, &lit).unwrap();
        assert!(r.violations > 0);
    }

    #[test]
    fn p_and_constant() {
        let nil = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let (_, t) = compressed(nil, 5, 3);
        let f = MPoly::coordinate(2, 1);
        assert!((operator_norm(&f.eval_tuple(&t.components()).unwrap()) - 1.0).abs() < 1e-14);
        let k = MPoly::constant(2, CMatrix::scalar(C64::new(2.0, 0.0))).unwrap();
        assert!((operator_norm(&k.eval_tuple(&t.components()).unwrap()) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gate_blocks_unitary_p() {
        let t = OperatorTuple::new(
            vec![CMatrix::scalar(C64::new(1.0, 0.0))],
            CMatrix::identity(1),
        )
        .unwrap();
        let pf = PencilFamily::new(vec![CMatrix::scalar(C64::new(0.5, 0.0))]).unwrap();
        let err = vn_experiment(&t, Some(&pf), &small_cfg()).unwrap_err();
        assert!(matches!(err, Error::HypothesesNotMet(_)));
        let forced = VnConfig {
            override_hypotheses: true,
            trials: 2,
            ..small_cfg()
        };
        let r = vn_experiment(&t, Some(&pf), &forced).unwrap();
        assert!(r.exploratory);
    }

    #[test]
    fn csv_lines() {
        let (_, t) = compressed(CMatrix::scalar(C64::new(0.5, 0.0)), 4, 3);
        let cfg = VnConfig {
            trials: 3,
            ..small_cfg()
        };
        let r = vn_experiment(&t, None, &cfg).unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().ends_with("HOLDS"));
    }
}
