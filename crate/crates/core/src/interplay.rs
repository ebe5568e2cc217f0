//! From three symmetric coordinates down to two: the twisted projection
//! `(s_1, s_2, p) ↦ (s_1/3 + ω s_2/3, ω p)`, its operator version, and the
//! image of a distinguished variety under `ω = 1`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma_geom::{
    ay_criterion, canonical_c, classify_point, GammaPoint, PointClass, PointLabel, DEFAULT_TOL,
};
use crate::io::{c_to_wire, mat_to_wire};
use crate::numerics::{multiset_distance, CMatrix, C64};
use crate::op_theory::OperatorTuple;
use crate::variety::{
    condition_one, fiber, g2_variety_from_matrix, sample_variety, AdjointConvention, DiscGrid,
    G2Variety, PencilFamily, DEFAULT_PENCIL_COMM_TOL,
};

/// Allowed distance between pushed-forward fiber points and the fiber of the
/// two-variable pencil over the same `p`.
pub const IMAGE_MATCH_TOL: f64 = 1e-6;

fn check_omega(omega: C64) -> Result<()> {
    let modulus = omega.norm();
    // NaN fails too
    if (modulus - 1.0).abs().is_nan() || (modulus - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnimodular { modulus });
    }
    Ok(())
}

pub fn project32(x: &GammaPoint, omega: C64) -> Result<GammaPoint> {
    if x.n() != 3 {
        return Err(Error::Dimension(format!(
            "project32 needs n = 3, got n = {}",
            x.n()
        )));
    }
    check_omega(omega)?;
    let s = x.s();
    GammaPoint::new(vec![s[0] / 3.0 + omega * s[1] / 3.0], omega * x.p())
}

pub fn project32_operator(t: &OperatorTuple, omega: C64) -> Result<OperatorTuple> {
    if t.n() != 3 {
        return Err(Error::Dimension(format!(
            "project32 needs n = 3, got n = {}",
            t.n()
        )));
    }
    check_omega(omega)?;
    let s = &t.s_i(1).scale_real(1.0 / 3.0) + &t.s_i(2).scale(omega / 3.0);
    OperatorTuple::new(vec![s], t.p().scale(omega))
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageAudit {
    pub nodes: usize,
    pub points: usize,
    /// Nodes where either fiber could not be computed.
    pub fiber_failures: usize,
    /// Largest matching distance between `(s_1 + s_2)/3` and the two-variable fiber.
    pub max_mismatch: f64,
    pub worst_p: [f64; 2],
    /// Images over `|p| < 1` not classified `INTERIOR`.
    pub interior_misses: usize,
    /// Images over `|p| = 1` not classified `DISTINGUISHED`.
    pub boundary_misses: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PushforwardResult {
    #[serde(rename = "A", serialize_with = "ser_mat")]
    pub a: CMatrix,
    pub omega: f64,
    /// Pencil `F = A`, i.e. `det(A^* + p A - s I) = 0`, with its validation.
    pub g2: G2Variety,
    pub images: ImageAudit,
}

fn ser_mat<S: serde::Serializer>(m: &CMatrix, ser: S) -> std::result::Result<S::Ok, S::Error> {
    mat_to_wire(m).serialize(ser)
}

impl PushforwardResult {
    pub fn g2_pencil(&self) -> &PencilFamily {
        &self.g2.pencil
    }
}

pub fn pushforward_variety(pf: &PencilFamily) -> Result<PushforwardResult> {
    pushforward_variety_on(pf, &DiscGrid::default(), 0)
}

/// `W = φ(Λ)` with `φ(s_1, s_2, p) = ((s_1 + s_2)/3, p)`. Summing the two
/// pencils gives `3 (A^* + p A)` with `A = (F_1 + F_2)/3`, so the images are
/// eigenvalues of the two-variable pencil; this is re-checked node by node.
pub fn pushforward_variety_on(
    pf: &PencilFamily,
    grid: &DiscGrid,
    seed: u64,
) -> Result<PushforwardResult> {
    if pf.n() != 3 {
        return Err(Error::Dimension(format!(
            "pushforward needs n = 3, got n = {}",
            pf.n()
        )));
    }
    let c1 = condition_one(pf, DEFAULT_PENCIL_COMM_TOL);
    if !c1.pass {
        return Err(Error::HypothesesNotMet(format!(
            "pencil commutation fails: commutator {:.3e}, starred {:.3e}, threshold {:.3e}",
            c1.commuting_worst, c1.starred_worst, c1.threshold
        )));
    }
    let a = (pf.f(1) + pf.f(2)).scale_real(1.0 / 3.0);
    let g2 = g2_variety_from_matrix(&a, AdjointConvention::AStarPlusPA)?;
    let sample = sample_variety(pf, grid, seed)?;

    struct Node {
        failed: bool,
        points: usize,
        mismatch: f64,
        interior_misses: usize,
        boundary_misses: usize,
    }
    let nodes: Vec<(C64, Node)> = sample
        .records
        .par_iter()
        .map(|r| {
            let bad = Node {
                failed: true,
                points: 0,
                mismatch: 0.0,
                interior_misses: 0,
                boundary_misses: 0,
            };
            if r.error.is_some() {
                return (r.p, bad);
            }
            let Ok(target) = fiber(&g2.pencil, r.p, seed) else {
                return (r.p, bad);
            };
            let images: Vec<Vec<C64>> = r.fiber.iter().map(|s| vec![(s[0] + s[1]) / 3.0]).collect();
            let mismatch = multiset_distance(&images, &target);
            let (mut interior_misses, mut boundary_misses) = (0, 0);
            for k in 0..images.len() {
                let label =
                    crate::variety::classify_fiber_point(&images, k, r.p, DEFAULT_TOL).label;
                if r.on_boundary && label != PointLabel::Distinguished {
                    boundary_misses += 1;
                }
                if !r.on_boundary && label != PointLabel::Interior {
                    interior_misses += 1;
                }
            }
            (
                r.p,
                Node {
                    failed: false,
                    points: images.len(),
                    mismatch,
                    interior_misses,
                    boundary_misses,
                },
            )
        })
        .collect();

    let mut audit = ImageAudit {
        nodes: nodes.len(),
        points: 0,
        fiber_failures: 0,
        max_mismatch: 0.0,
        worst_p: [0.0, 0.0],
        interior_misses: 0,
        boundary_misses: 0,
        pass: false,
    };
    for (p, nd) in &nodes {
        audit.fiber_failures += nd.failed as usize;
        audit.points += nd.points;
        audit.interior_misses += nd.interior_misses;
        audit.boundary_misses += nd.boundary_misses;
        if nd.mismatch > audit.max_mismatch {
            audit.max_mismatch = nd.mismatch;
            audit.worst_p = c_to_wire(*p);
        }
    }
    let scale = 1.0 + pf.max_norm();
    audit.pass = audit.fiber_failures == 0
        && audit.max_mismatch <= IMAGE_MATCH_TOL * scale
        && audit.interior_misses == 0
        && audit.boundary_misses == 0;
    Ok(PushforwardResult {
        omega: g2.omega,
        a,
        g2,
        images: audit,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageRow {
    pub k: usize,
    pub omega: [f64; 2],
    pub s: [f64; 2],
    pub p: [f64; 2],
    pub label: PointLabel,
    pub ay_slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub source: GammaPoint,
    pub source_class: PointClass,
    pub canonical_c: Vec<[f64; 2]>,
    /// Distance of the computed `c` from `(1, 2)`.
    pub canonical_c_error: f64,
    /// Whether `c`, read as `(s, p)`, satisfies the closed two-variable criterion.
    pub canonical_c_in_closure: bool,
    pub omega_samples: usize,
    pub images_exterior: usize,
    pub omega_one: ImageRow,
    pub omega_minus_one: ImageRow,
    pub images: Vec<ImageRow>,
}

fn image_row(x: &GammaPoint, k: usize, omega: C64) -> ImageRow {
    let y = project32(x, omega).expect("unimodular sample");
    let (s, p) = (y.s()[0], y.p());
    ImageRow {
        k,
        omega: c_to_wire(omega),
        s: c_to_wire(s),
        p: c_to_wire(p),
        label: classify_point(&y, DEFAULT_TOL).label,
        ay_slack: ay_criterion(s, p).1,
    }
}

/// `(2, 5/2, 1/2)` is outside the closed domain, yet every twisted projection
/// of it lands inside the two-variable one.
pub fn counterexample_demo() -> CounterexampleReport {
    const SAMPLES: usize = 360;
    let re = |v: f64| C64::new(v, 0.0);
    let x = GammaPoint::new(vec![re(2.0), re(2.5)], re(0.5)).expect("finite point");
    let c = canonical_c(&x, DEFAULT_TOL).expect("|p| < 1");
    let error = (c[0] - re(1.0)).norm().max((c[1] - re(2.0)).norm());
    let images: Vec<ImageRow> = (0..SAMPLES)
        .map(|k| {
            let omega = if k == 0 {
                re(1.0)
            } else {
                C64::from_polar(1.0, 2.0 * PI * k as f64 / SAMPLES as f64)
            };
            image_row(&x, k, omega)
        })
        .collect();
    CounterexampleReport {
        source_class: classify_point(&x, DEFAULT_TOL),
        canonical_c: c.iter().map(|&z| c_to_wire(z)).collect(),
        canonical_c_error: error,
        canonical_c_in_closure: ay_criterion(c[0], c[1]).0,
        omega_samples: SAMPLES,
        images_exterior: images
            .iter()
            .filter(|r| r.label == PointLabel::Exterior)
            .count(),
        omega_one: image_row(&x, 0, re(1.0)),
        omega_minus_one: image_row(&x, SAMPLES / 2, re(-1.0)),
        images,
        source: x,
    }
}
