use rayon::prelude::*;
use serde::Serialize;

use super::{fiber, DiscGrid, PencilFamily, DEFAULT_PENCIL_COMM_TOL};
use crate::gamma_geom::{classify_point, GammaPoint, PointLabel};
use crate::io::c_to_wire;
use crate::joint_spectrum::commutator_report;
use crate::numerics::{det, operator_norm, CMatrix, C64};

/// Points classified `EXTERIOR` by less than this are reported as
/// inconclusive rather than as a refutation.
pub const RESOLUTION: f64 = 1e-6;
/// Fiber points closer than this (relative) are treated as a collision.
pub const COLLISION_GAP: f64 = 1e-6;
/// Tolerance relaxation at collision points.
pub const COLLISION_RELAX: f64 = 1e2;

#[derive(Clone, Debug, Serialize)]
pub struct ConditionOne {
    /// `‖[F_i, F_j]‖` for `i < j`.
    pub commuting_worst: f64,
    /// `‖[F_i^*, F_{n-j}] - [F_j^*, F_{n-i}]‖` for `i < j`.
    pub starred_worst: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Containment {
    pub nodes: usize,
    pub points: usize,
    pub fiber_failures: usize,
    pub non_interior: usize,
    pub min_margin: f64,
    pub min_margin_p: [f64; 2],
    pub min_margin_point: Vec<[f64; 2]>,
    /// `(radius, smallest margin on that circle)`, innermost first.
    pub margin_by_radius: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Monicity {
    pub leading_coefficients: Vec<[f64; 2]>,
    pub expected: f64,
    pub max_deviation: f64,
    pub satisfied: bool,
    pub justification: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryAudit {
    pub nodes: usize,
    pub points: usize,
    pub fiber_failures: usize,
    pub non_distinguished: usize,
    /// Largest `|s_i - conj(s_{n-i}) p|` seen on the unit circle.
    pub worst_relation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Valid,
    Invalid {
        reason: String,
        witness_p: Option<[f64; 2]>,
        witness_point: Option<Vec<[f64; 2]>>,
    },
    Inconclusive {
        reason: String,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Valid => "VALID",
            Verdict::Invalid { .. } => "INVALID",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub n: usize,
    pub d: usize,
    pub condition_one: ConditionOne,
    pub containment: Option<Containment>,
    pub monicity: Monicity,
    pub boundary: Option<BoundaryAudit>,
    pub verdict: Verdict,
}

pub fn condition_one(pf: &PencilFamily, comm_tol: f64) -> ConditionOne {
    let n = pf.n();
    let f = pf.matrices();
    let a = commutator_report(f, comm_tol);
    let mut starred: f64 = 0.0;
    for i in 1..n {
        for j in i + 1..n {
            let lhs = pf
                .f(i)
                .adjoint()
                .commutator(pf.f(n - j))
                .expect("same order");
            let rhs = pf
                .f(j)
                .adjoint()
                .commutator(pf.f(n - i))
                .expect("same order");
            starred = starred.max(operator_norm(&(&lhs - &rhs)));
        }
    }
    let threshold = a.threshold;
    ConditionOne {
        commuting_worst: a.worst,
        starred_worst: starred,
        threshold,
        pass: a.worst <= threshold && starred <= threshold,
    }
}

/// Leading coefficient in `s` of `det(Φ - s I)`, read off a DFT of samples on
/// the circle of radius `1 + ‖Φ‖`.
fn leading_coefficient(phi: &CMatrix) -> C64 {
    let d = phi.rows();
    let r = 1.0 + operator_norm(phi);
    let m = d + 1;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..m {
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
        let s = w * r;
        let v = det(&(phi - &CMatrix::identity(d).scale(s))).unwrap_or(C64::new(f64::NAN, 0.0));
        // coefficient of s^d: (1/m) Σ g(s_k) w^{-dk} / r^d
        acc += v * w.powu(d as u32).conj();
    }
    acc / (m as f64 * r.powi(d as i32))
}

fn monicity(pf: &PencilFamily) -> Monicity {
    let expected = if pf.d().is_multiple_of(2) { 1.0 } else { -1.0 };
    let probes = [
        C64::new(0.0, 0.0),
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.9),
        C64::new(-1.0, 0.0),
    ];
    let mut leads = Vec::new();
    let mut dev: f64 = 0.0;
    for &p in &probes {
        for phi in pf.pencils_at(p) {
            let l = leading_coefficient(&phi);
            dev = dev.max((l - expected).norm());
            leads.push(c_to_wire(l));
        }
    }
    Monicity {
        leading_coefficients: leads,
        expected,
        max_deviation: dev,
        satisfied: dev <= 1e-8,
        justification: "each f_i = det(F_i^* + p F_{n-i} - s_i I) has leading term (-s_i)^d in its own \
                        variable and the variables s_1..s_{n-1} are separated, so the f_i form a regular sequence",
    }
}

/// Whether point `k` of a fiber collides with another point of the same fiber.
pub(crate) fn in_collision(fb: &[Vec<C64>], k: usize) -> bool {
    fb.iter().enumerate().any(|(j, q)| {
        j != k
            && q.iter()
                .zip(&fb[k])
                .map(|(a, b)| (a - b).norm() / (1.0 + b.norm()))
                .fold(0.0, f64::max)
                <= COLLISION_GAP
    })
}

pub(crate) fn classify_fiber_point(
    fb: &[Vec<C64>],
    k: usize,
    p: C64,
    tol: f64,
) -> crate::gamma_geom::PointClass {
    let t = if in_collision(fb, k) {
        tol * COLLISION_RELAX
    } else {
        tol
    };
    let x = GammaPoint::new(fb[k].clone(), p).expect("fiber point has n-1 finite coordinates");
    classify_point(&x, t)
}

struct NodeOutcome {
    p: C64,
    boundary: bool,
    fiber: Option<Vec<Vec<C64>>>,
}

/// Checks the pencil conditions on a grid: commutators, sampled containment
/// over the open disc, monicity of the defining polynomials, and the
/// distinguished-boundary exit on the unit circle.
pub fn validate_pencil(pf: &PencilFamily, grid: &DiscGrid, tol: f64) -> CheckReport {
    let cond = condition_one(pf, DEFAULT_PENCIL_COMM_TOL);
    let mono = monicity(pf);
    let mut report = CheckReport {
        n: pf.n(),
        d: pf.d(),
        condition_one: cond.clone(),
        containment: None,
        monicity: mono,
        boundary: None,
        verdict: Verdict::Valid,
    };
    if !cond.pass {
        report.verdict = Verdict::Invalid {
            reason: format!(
                "pencil commutation fails: commutator {:.3e}, starred family {:.3e}, threshold {:.3e}",
                cond.commuting_worst, cond.starred_worst, cond.threshold
            ),
            witness_p: None,
            witness_point: None,
        };
        return report;
    }
    if let Err(e) = grid.validate() {
        report.verdict = Verdict::Inconclusive {
            reason: e.to_string(),
        };
        return report;
    }

    let outcomes: Vec<NodeOutcome> = grid
        .nodes()
        .into_par_iter()
        .map(|(p, boundary)| NodeOutcome {
            p,
            boundary,
            fiber: fiber(pf, p, 0).ok(),
        })
        .collect();

    let mut containment = Containment {
        nodes: 0,
        points: 0,
        fiber_failures: 0,
        non_interior: 0,
        min_margin: f64::INFINITY,
        min_margin_p: [0.0; 2],
        min_margin_point: Vec::new(),
        margin_by_radius: (0..grid.radii)
            .map(|k| (grid.radius(k), f64::INFINITY))
            .collect(),
    };
    let mut audit = BoundaryAudit {
        nodes: 0,
        points: 0,
        fiber_failures: 0,
        non_distinguished: 0,
        worst_relation: 0.0,
    };
    let mut invalid: Option<Verdict> = None;
    let mut inconclusive: Vec<String> = Vec::new();

    for (idx, node) in outcomes.iter().enumerate() {
        let p = node.p;
        if node.boundary {
            audit.nodes += 1;
        } else {
            containment.nodes += 1;
        }
        let Some(fb) = &node.fiber else {
            if node.boundary {
                audit.fiber_failures += 1;
            } else {
                containment.fiber_failures += 1;
            }
            continue;
        };
        for k in 0..fb.len() {
            let class = classify_fiber_point(fb, k, p, tol);
            let refuted = class.label == PointLabel::Exterior && class.margin < -RESOLUTION;
            if refuted && invalid.is_none() {
                invalid = Some(Verdict::Invalid {
                    reason: format!(
                        "fiber point over p = {:.6}{:+.6}i lies outside the closed symmetrized polydisc (margin {:.3e})",
                        p.re, p.im, class.margin
                    ),
                    witness_p: Some(c_to_wire(p)),
                    witness_point: Some(fb[k].iter().map(|&z| c_to_wire(z)).collect()),
                });
            }
            if node.boundary {
                audit.points += 1;
                let s = &fb[k];
                let m = s.len();
                let rel = (0..m)
                    .map(|i| (s[i] - s[m - 1 - i].conj() * p).norm())
                    .fold(0.0, f64::max);
                audit.worst_relation = audit.worst_relation.max(rel);
                if class.label != PointLabel::Distinguished {
                    audit.non_distinguished += 1;
                }
            } else {
                containment.points += 1;
                if class.label != PointLabel::Interior {
                    containment.non_interior += 1;
                }
                let ring = idx / grid.angles;
                let slot = &mut containment.margin_by_radius[ring].1;
                *slot = slot.min(class.margin);
                if class.margin < containment.min_margin {
                    containment.min_margin = class.margin;
                    containment.min_margin_p = c_to_wire(p);
                    containment.min_margin_point = fb[k].iter().map(|&z| c_to_wire(z)).collect();
                }
            }
        }
    }

    if containment.non_interior > 0 {
        inconclusive.push(format!(
            "{} interior-grid fiber points are not strictly inside (margin below resolution)",
            containment.non_interior
        ));
    }
    if containment.fiber_failures + audit.fiber_failures > 0 {
        inconclusive.push(format!(
            "{} grid fibers could not be computed",
            containment.fiber_failures + audit.fiber_failures
        ));
    }
    if audit.non_distinguished > 0 {
        inconclusive.push(format!(
            "{} unit-circle fiber points do not classify DISTINGUISHED",
            audit.non_distinguished
        ));
    }
    if !report.monicity.satisfied {
        inconclusive.push(format!(
            "numerical leading coefficients deviate from (-1)^d by {:.3e}",
            report.monicity.max_deviation
        ));
    }

    report.verdict = match invalid {
        Some(v) => v,
        None if inconclusive.is_empty() => Verdict::Valid,
        None => Verdict::Inconclusive {
            reason: inconclusive.join("; "),
        },
    };
    if grid.radii > 0 {
        report.containment = Some(containment);
    }
    if grid.include_boundary {
        report.boundary = Some(audit);
    }
    report
}
