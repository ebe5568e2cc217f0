use serde::Serialize;

use super::{binomial, OperatorTuple};
use crate::gamma_geom::{classify_point, GammaPoint, PointLabel};
use crate::io::c_to_wire;
use crate::joint_spectrum::{joint_eigs, MatrixTuple};
use crate::numerics::{normality_defect, operator_norm, spectral_radius, CMatrix};
use crate::vn_check::{gamma_sup_bound, random_poly, MPoly};

/// Spectral points outside by less than this are not counted as refutations.
const SPECTRAL_RESOLUTION: f64 = 1e-6;

/// Sampling parameters for the polynomial evidence step.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Evidence {
    pub trials: usize,
    pub max_degree: usize,
    pub seed: u64,
    pub tol: f64,
    /// Number of torus points used to bound `sup |f|` over the closed domain.
    pub torus_budget: usize,
}

impl Default for Evidence {
    fn default() -> Self {
        Evidence {
            trials: 16,
            max_degree: 3,
            seed: 0,
            tol: 1e-9,
            torus_budget: 1 << 18,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TupleLabel {
    GammaUnitary,
    GammaIsometry,
    PureGammaIsometry,
    ContractionEvidence,
    Refuted,
}

impl TupleLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            TupleLabel::GammaUnitary => "GAMMA_UNITARY",
            TupleLabel::GammaIsometry => "GAMMA_ISOMETRY",
            TupleLabel::PureGammaIsometry => "PURE_GAMMA_ISOMETRY",
            TupleLabel::ContractionEvidence => "CONTRACTION_EVIDENCE",
            TupleLabel::Refuted => "REFUTED",
        }
    }
}

impl std::fmt::Display for TupleLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A coordinate polynomial whose supremum over the domain is exceeded.
    Norm {
        component: String,
        norm: f64,
        bound: f64,
    },
    /// A joint eigenvalue outside the closed domain.
    SpectrumPoint { point: Vec<[f64; 2]>, margin: f64 },
    /// `‖f(tuple)‖` above a certified upper bound for `sup |f|`.
    Polynomial { poly: MPoly, lhs: f64, bound: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleClass {
    pub label: TupleLabel,
    pub witness: Option<Witness>,
    pub normal: bool,
    pub normality_defect: f64,
    /// `None` when the joint spectrum could not be computed.
    pub spectrum_labels: Option<Vec<PointLabel>>,
    /// `‖P^*P - I‖`.
    pub isometry_defect: f64,
    /// `max_i ‖S_i - S_{n-i}^* P‖`.
    pub relation_defect: f64,
    pub p_spectral_radius: Option<f64>,
    /// `‖(P^*)^m‖` with `m` the space dimension.
    pub p_power_norm: f64,
    pub trials_run: usize,
    /// Largest `‖f(tuple)‖ / sampled sup |f|` seen in the polynomial trials.
    pub max_ratio: f64,
}

/// Decision tree: norm and spectral necessary conditions, Γ-unitary and
/// Γ-isometry tests, then randomized polynomial evidence.
pub fn classify_tuple(t: &OperatorTuple, ev: &Evidence) -> TupleClass {
    let n = t.n();
    let m = t.dim();
    let tol = ev.tol;
    let comps = t.components();

    let p_norm = operator_norm(t.p());
    let mut out = TupleClass {
        label: TupleLabel::ContractionEvidence,
        witness: None,
        normal: false,
        normality_defect: 0.0,
        spectrum_labels: None,
        isometry_defect: operator_norm(&(&(&t.p().adjoint() * t.p()) - &CMatrix::identity(m))),
        relation_defect: (1..n)
            .map(|i| operator_norm(&(t.s_i(i) - &(&t.s_i(n - i).adjoint() * t.p()))))
            .fold(0.0, f64::max),
        p_spectral_radius: spectral_radius(t.p()).ok(),
        p_power_norm: t
            .p()
            .adjoint()
            .pow(m)
            .map(|x| operator_norm(&x))
            .unwrap_or(f64::NAN),
        trials_run: 0,
        max_ratio: 0.0,
    };

    let refute = |mut out: TupleClass, w: Witness| {
        out.label = TupleLabel::Refuted;
        out.witness = Some(w);
        out
    };

    if p_norm > 1.0 + tol {
        return refute(
            out,
            Witness::Norm {
                component: "P".into(),
                norm: p_norm,
                bound: 1.0,
            },
        );
    }
    for i in 1..n {
        let s = operator_norm(t.s_i(i));
        let b = binomial(n, i);
        if s > b * (1.0 + tol) {
            return refute(
                out,
                Witness::Norm {
                    component: format!("S_{i}"),
                    norm: s,
                    bound: b,
                },
            );
        }
    }

    let mut all_distinguished = false;
    if let Ok(js) = MatrixTuple::new(comps.clone()).and_then(|mt| joint_eigs(&mt, ev.seed)) {
        let mut labels = Vec::with_capacity(js.points.len());
        for pt in &js.points {
            let (s, p) = pt.split_at(n - 1);
            let x = GammaPoint::new(s.to_vec(), p[0]).expect("finite joint eigenvalue");
            let c = classify_point(&x, tol);
            if c.label == PointLabel::Exterior && c.margin < -SPECTRAL_RESOLUTION {
                return refute(
                    out,
                    Witness::SpectrumPoint {
                        point: pt.iter().map(|&z| c_to_wire(z)).collect(),
                        margin: c.margin,
                    },
                );
            }
            labels.push(c.label);
        }
        all_distinguished = labels.iter().all(|&l| l == PointLabel::Distinguished);
        out.spectrum_labels = Some(labels);
    }

    out.normality_defect = comps
        .iter()
        .map(|x| normality_defect(x) / (1.0 + operator_norm(x).powi(2)))
        .fold(0.0, f64::max);
    out.normal = out.normality_defect <= tol;
    if out.normal && all_distinguished {
        out.label = TupleLabel::GammaUnitary;
        return out;
    }

    let scale = 1.0 + t.s().iter().map(operator_norm).fold(0.0, f64::max);
    if out.isometry_defect <= tol * 10.0 && out.relation_defect <= tol * 10.0 * scale {
        let scaled_ok = if n == 2 {
            operator_norm(t.s_i(1)) <= 2.0 * (1.0 + tol)
        } else {
            let w: Vec<CMatrix> = (1..n)
                .map(|i| t.s_i(i).scale_real((n - i) as f64 / n as f64))
                .collect();
            let (last, rest) = w.split_last().expect("n >= 3");
            match OperatorTuple::new(rest.to_vec(), last.clone()) {
                Ok(inner) => classify_tuple(&inner, ev).label != TupleLabel::Refuted,
                Err(_) => false,
            }
        };
        if scaled_ok {
            out.label = if out.p_power_norm <= 1e-10 {
                TupleLabel::PureGammaIsometry
            } else {
                TupleLabel::GammaIsometry
            };
            return out;
        }
    }

    for k in 0..ev.trials {
        let f = match random_poly(n, ev.max_degree, 1, ev.seed.wrapping_add(k as u64)) {
            Ok(f) => f,
            Err(_) => break,
        };
        let lhs = match f.eval_tuple(&comps) {
            Ok(v) => operator_norm(&v),
            Err(_) => break,
        };
        let sup = gamma_sup_bound(&f, ev.torus_budget);
        out.trials_run += 1;
        if sup.sampled > 0.0 {
            out.max_ratio = out.max_ratio.max(lhs / sup.sampled);
        }
        if lhs > sup.certified * (1.0 + 1e-12) + tol {
            return refute(
                out,
                Witness::Polynomial {
                    poly: f,
                    lhs,
                    bound: sup.certified,
                },
            );
        }
    }
    out
}
