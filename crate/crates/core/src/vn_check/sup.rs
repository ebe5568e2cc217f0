use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::MPoly;
use crate::gamma_geom::elementary_symmetric;
use crate::numerics::C64;
use crate::variety::{fiber, PencilFamily, VarietySample};

#[derive(Clone, Debug, Serialize)]
pub struct SupBound {
    /// Largest `‖f∘π‖` on the torus grid.
    pub sampled: f64,
    /// Upper bound for the true supremum; infinite when the grid is too coarse.
    pub certified: f64,
    pub per_axis: usize,
}

/// Bounds `sup ‖f‖` over the closed symmetrized polydisc by sampling
/// `f∘π` on a product grid of the torus (the supremum lives on the
/// distinguished boundary). `f∘π` has degree at most `deg f` in each torus
/// variable, so Bernstein's inequality turns the grid maximum into a
/// certified bound `max / (1 - π D / M)^n`.
pub fn gamma_sup_bound(f: &MPoly, budget: usize) -> SupBound {
    let n = f.n();
    let per_axis = ((budget.max(1) as f64).powf(1.0 / n as f64).floor() as usize).max(2);
    let total = per_axis.pow(n as u32);
    let roots: Vec<C64> = (0..per_axis)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / per_axis as f64))
        .collect();
    let sampled = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut z = Vec::with_capacity(n);
            for _ in 0..n {
                z.push(roots[idx % per_axis]);
                idx /= per_axis;
            }
            f.norm_at(&elementary_symmetric(&z))
        })
        .reduce(|| 0.0, f64::max);
    let d = f.degree() as f64;
    let ratio = PI * d / per_axis as f64;
    let certified = if ratio < 1.0 {
        sampled / (1.0 - ratio).powi(n as i32)
    } else {
        f64::INFINITY
    };
    SupBound {
        sampled,
        certified,
        per_axis,
    }
}

/// Largest `‖f‖` over the sampled variety points; with `conjugate` the
/// polynomial is evaluated at the conjugated point.
pub fn sampled_sup(f: &MPoly, sample: &VarietySample, conjugate: bool) -> f64 {
    sample
        .records
        .par_iter()
        .map(|r| {
            r.fiber
                .iter()
                .map(|s| f.norm_at(&point(s, r.p, conjugate)))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn point(s: &[C64], p: C64, conjugate: bool) -> Vec<C64> {
    let mut v: Vec<C64> = s.to_vec();
    v.push(p);
    if conjugate {
        v.iter_mut().for_each(|z| *z = z.conj());
    }
    v
}

fn fiber_max(f: &MPoly, pf: &PencilFamily, theta: f64, seed: u64) -> f64 {
    let p = C64::from_polar(1.0, theta);
    match fiber(pf, p, seed) {
        Ok(fb) => fb
            .iter()
            .map(|s| f.norm_at(&point(s, p, false)))
            .fold(0.0, f64::max),
        Err(_) => 0.0,
    }
}

/// Golden-section refinement of `θ ↦ max_fiber ‖f‖` on the unit circle
/// around the best `top` boundary nodes of `sample`. Every value returned is
/// attained at an actual variety point, so it never overshoots the supremum.
pub fn refine_boundary_sup(
    f: &MPoly,
    pf: &PencilFamily,
    sample: &VarietySample,
    top: usize,
    seed: u64,
) -> f64 {
    let mut nodes: Vec<(f64, f64)> = sample
        .records
        .iter()
        .filter(|r| r.on_boundary)
        .map(|r| {
            let v = r
                .fiber
                .iter()
                .map(|s| f.norm_at(&point(s, r.p, false)))
                .fold(0.0, f64::max);
            (v, r.p.arg())
        })
        .collect();
    if nodes.is_empty() {
        return 0.0;
    }
    let h = 2.0 * PI / nodes.len() as f64;
    nodes.sort_by(|a, b| b.0.total_cmp(&a.0));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = nodes[0].0;
    for &(v0, th) in nodes.iter().take(top) {
        let (mut a, mut b) = (th - h, th + h);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = fiber_max(f, pf, c, seed);
        let mut fd = fiber_max(f, pf, d, seed);
        for _ in 0..30 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = fiber_max(f, pf, c, seed);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = fiber_max(f, pf, d, seed);
            }
        }
        best = best.max(v0).max(fc).max(fd);
    }
    best
}
