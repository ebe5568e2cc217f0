use std::f64::consts::PI;

use super::hermitian::lambda_max;
use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

const GOLDEN_PASSES: usize = 3;
const GOLDEN_STEPS: usize = 25;
const MAX_PEAKS: usize = 8;

/// `λ_max((e^{iθ} m + e^{-iθ} m^*) / 2)`; its maximum over θ is the numerical radius.
pub fn rotated_real_part_max(m: &CMatrix, theta: f64) -> f64 {
    let rot = m.scale(C64::from_polar(1.0, theta));
    lambda_max(&(&rot + &rot.adjoint()).scale_real(0.5)).expect("square input")
}

/// Numerical radius `ω(m) = max |⟨mv, v⟩|` over unit vectors.
///
/// Samples θ on a uniform grid of `grid_size` points, then refines around the
/// best grid point with golden-section passes on the bracketing interval.
pub fn numerical_radius(m: &CMatrix, grid_size: usize) -> Result<f64> {
    m.require_square()?;
    if grid_size < 8 {
        return Err(Error::InvalidArgument(format!(
            "numerical radius grid needs at least 8 points, got {grid_size}"
        )));
    }
    if m.rows() == 0 {
        return Ok(0.0);
    }
    let h = 2.0 * PI / grid_size as f64;
    let samples: Vec<f64> = (0..grid_size)
        .map(|k| rotated_real_part_max(m, k as f64 * h))
        .collect();
    let mut best = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Refine every discrete local maximum of the periodic grid, highest first;
    // the function can have several peaks of similar height.
    let mut peaks: Vec<usize> = (0..grid_size)
        .filter(|&k| {
            let prev = samples[(k + grid_size - 1) % grid_size];
            let next = samples[(k + 1) % grid_size];
            samples[k] >= prev && samples[k] >= next
        })
        .collect();
    peaks.sort_by(|&a, &b| samples[b].total_cmp(&samples[a]));
    peaks.truncate(MAX_PEAKS);
    for k in peaks {
        best = best.max(golden_refine(m, k as f64 * h, h));
    }
    Ok(best.max(0.0))
}

/// Three golden-section passes on `[center - h, center + h]`, re-centering
/// the bracket on the incumbent after each pass.
fn golden_refine(m: &CMatrix, center: f64, h: f64) -> f64 {
    let f = |t: f64| rotated_real_part_max(m, t);
    let mut best_theta = center;
    let mut best = f(center);
    let mut lo = center - h;
    let mut hi = center + h;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..GOLDEN_PASSES {
        let mut a = lo;
        let mut b = hi;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = f(x1);
        let mut f2 = f(x2);
        for _ in 0..GOLDEN_STEPS {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = f(x1);
            }
        }
        let (t, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if v > best {
            best = v;
            best_theta = t;
        }
        let width = (hi - lo) * 0.25;
        lo = best_theta - width;
        hi = best_theta + width;
    }
    best
}
