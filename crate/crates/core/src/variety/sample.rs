use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::validate::{classify_fiber_point, in_collision, COLLISION_RELAX};
use super::{fiber, validate_pencil, CheckReport, DiscGrid, PencilFamily};
use crate::error::{Error, Result};
use crate::gamma_geom::{
    classify_point, desymmetrize, symmetrize, GammaPoint, PointClass, PointLabel, DEFAULT_TOL,
};
use crate::numerics::{numerical_radius, CMatrix, C64};

/// Determinant residuals are accepted up to this times `(1 + max ‖F_i‖)^d`.
pub const DET_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub p: C64,
    pub on_boundary: bool,
    pub fiber: Vec<Vec<C64>>,
    /// `max_i |f_i(s, p)|` per fiber point.
    pub det_residuals: Vec<f64>,
    /// Residual within tolerance (relaxed at collision points).
    pub residual_ok: Vec<bool>,
    pub classes: Vec<PointClass>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarietySample {
    pub n: usize,
    pub d: usize,
    pub grid: DiscGrid,
    pub seed: u64,
    pub records: Vec<SampleRecord>,
}

/// Fibers over the polar grid. The pencil is expected to have passed
/// [`validate_pencil`]; this function does not re-check it.
pub fn sample_variety(pf: &PencilFamily, grid: &DiscGrid, seed: u64) -> Result<VarietySample> {
    sample_variety_tol(pf, grid, seed, DEFAULT_TOL)
}

pub fn sample_variety_tol(
    pf: &PencilFamily,
    grid: &DiscGrid,
    seed: u64,
    tol: f64,
) -> Result<VarietySample> {
    grid.validate()?;
    let scale = pf.det_scale();
    let records = grid
        .nodes()
        .into_par_iter()
        .map(|(p, on_boundary)| match fiber(pf, p, seed) {
            Ok(fb) => {
                let mut det_residuals = Vec::with_capacity(fb.len());
                let mut residual_ok = Vec::with_capacity(fb.len());
                let mut classes = Vec::with_capacity(fb.len());
                for k in 0..fb.len() {
                    let res = pf
                        .defining_values(&fb[k], p)
                        .map(|v| v.iter().map(|z| z.norm()).fold(0.0, f64::max))
                        .unwrap_or(f64::INFINITY);
                    let relax = if in_collision(&fb, k) {
                        COLLISION_RELAX
                    } else {
                        1.0
                    };
                    det_residuals.push(res);
                    residual_ok.push(res <= DET_TOL * scale * relax);
                    classes.push(classify_fiber_point(&fb, k, p, tol));
                }
                SampleRecord {
                    p,
                    on_boundary,
                    fiber: fb,
                    det_residuals,
                    residual_ok,
                    classes,
                    error: None,
                }
            }
            Err(e) => SampleRecord {
                p,
                on_boundary,
                fiber: Vec::new(),
                det_residuals: Vec::new(),
                residual_ok: Vec::new(),
                classes: Vec::new(),
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(VarietySample {
        n: pf.n(),
        d: pf.d(),
        grid: *grid,
        seed,
        records,
    })
}

impl VarietySample {
    pub fn points(&self) -> impl Iterator<Item = (&SampleRecord, usize)> {
        self.records
            .iter()
            .flat_map(|r| (0..r.fiber.len()).map(move |k| (r, k)))
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }

    /// Long format: one row per fiber point and coordinate.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_p,im_p,branch,i,re_s,im_s,class,det_residual\n");
        for r in &self.records {
            for (k, pt) in r.fiber.iter().enumerate() {
                for (i, s) in pt.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{:.17e},{:.17e},{},{},{:.17e},{:.17e},{},{:.6e}",
                        r.p.re,
                        r.p.im,
                        k,
                        i + 1,
                        s.re,
                        s.im,
                        r.classes[k].label,
                        r.det_residuals[k]
                    );
                }
            }
        }
        out
    }
}

/// Number of connected components of the sampled cloud, linking each fiber
/// point to its nearest neighbour in every adjacent grid node. A heuristic
/// proxy for the number of irreducible pieces.
pub fn component_count(sample: &VarietySample) -> usize {
    let grid = &sample.grid;
    let recs = &sample.records;
    let mut offsets = Vec::with_capacity(recs.len() + 1);
    offsets.push(0usize);
    for r in recs {
        offsets.push(offsets.last().unwrap() + r.fiber.len());
    }
    let total = *offsets.last().unwrap();
    if total == 0 {
        return 0;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let a = grid.angles;
    let interior = grid.radii * a;
    let bdry = recs.len() - interior;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for k in 0..grid.radii {
        for j in 0..a {
            let u = k * a + j;
            edges.push((u, k * a + (j + 1) % a));
            if k + 1 < grid.radii {
                edges.push((u, (k + 1) * a + j));
            } else if bdry > 0 {
                edges.push((u, interior + j * grid.boundary_refine.max(1)));
            }
        }
    }
    for j in 0..bdry {
        edges.push((interior + j, interior + (j + 1) % bdry));
    }

    let dist = |x: &[C64], y: &[C64]| {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    };
    for (u, v) in edges {
        for (from, to) in [(u, v), (v, u)] {
            let (fu, fv) = (&recs[from].fiber, &recs[to].fiber);
            if fv.is_empty() {
                continue;
            }
            for (ka, pa) in fu.iter().enumerate() {
                let kb = (0..fv.len())
                    .min_by(|&x, &y| dist(pa, &fv[x]).total_cmp(&dist(pa, &fv[y])))
                    .expect("non-empty");
                let ra = find(&mut parent, offsets[from] + ka);
                let rb = find(&mut parent, offsets[to] + kb);
                parent[ra] = rb;
            }
        }
    }
    (0..total).filter(|&x| find(&mut parent, x) == x).count()
}

#[derive(Clone, Debug, Serialize)]
pub struct PolydiscPoint {
    pub p: C64,
    pub branch: usize,
    pub s: Vec<C64>,
    pub z: Vec<C64>,
    pub max_modulus: f64,
    pub min_modulus: f64,
    pub class: PointLabel,
    /// Interior points map strictly inside the polydisc and distinguished
    /// points onto the torus.
    pub consistent: bool,
    /// `max_i |f_i|` after re-symmetrizing `z`, relative to the determinant scale.
    pub resym_residual: f64,
}

pub fn polydisc_sample(pf: &PencilFamily, grid: &DiscGrid) -> Result<Vec<PolydiscPoint>> {
    polydisc_sample_from(pf, &sample_variety(pf, grid, 0)?)
}

pub fn polydisc_sample_from(
    pf: &PencilFamily,
    sample: &VarietySample,
) -> Result<Vec<PolydiscPoint>> {
    let scale = pf.det_scale();
    sample
        .points()
        .map(|(r, k)| {
            let x = GammaPoint::new(r.fiber[k].clone(), r.p)?;
            let z = desymmetrize(&x)?;
            let max_modulus = z.iter().map(|w| w.norm()).fold(0.0, f64::max);
            let min_modulus = z.iter().map(|w| w.norm()).fold(f64::INFINITY, f64::min);
            let class = r.classes[k].label;
            let consistent = match class {
                PointLabel::Interior => max_modulus < 1.0,
                PointLabel::Distinguished => {
                    (max_modulus - 1.0).abs() <= 1e-6 && (min_modulus - 1.0).abs() <= 1e-6
                }
                _ => true,
            };
            let back = symmetrize(&z)?;
            let resym_residual = pf
                .defining_values(back.s(), back.p())?
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max)
                / scale;
            Ok(PolydiscPoint {
                p: r.p,
                branch: k,
                s: r.fiber[k].clone(),
                z,
                max_modulus,
                min_modulus,
                class,
                consistent,
                resym_residual,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Separation {
    /// 1-based index of the first defining polynomial not vanishing at `x`.
    Separated {
        index: usize,
        value: C64,
    },
    OnVariety {
        max_abs: f64,
    },
}

/// The first `f_k` with `|f_k(x)| > tol`: a polynomial that vanishes on the
/// variety but not at `x`.
pub fn separating_poly(pf: &PencilFamily, x: &GammaPoint, tol: f64) -> Result<Separation> {
    if x.n() != pf.n() {
        return Err(Error::Dimension(format!(
            "point has n = {}, pencil has n = {}",
            x.n(),
            pf.n()
        )));
    }
    let class = classify_point(x, DEFAULT_TOL);
    if class.label == PointLabel::Exterior {
        return Err(Error::InvalidArgument(
            "separating_poly expects a point of the closed symmetrized polydisc".into(),
        ));
    }
    let vals = pf.defining_values(x.s(), x.p())?;
    if let Some((k, v)) = vals.iter().enumerate().find(|(_, v)| v.norm() > tol) {
        return Ok(Separation::Separated {
            index: k + 1,
            value: *v,
        });
    }
    Ok(Separation::OnVariety {
        max_abs: vals.iter().map(|v| v.norm()).fold(0.0, f64::max),
    })
}

/// Which way round a single matrix `A` enters the pencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjointConvention {
    /// `det(A + p A^* - s I) = 0`, i.e. `F = A^*`.
    APlusPAStar,
    /// `det(A^* + p A - s I) = 0`, i.e. `F = A`.
    AStarPlusPA,
}

#[derive(Clone, Debug, Serialize)]
pub struct G2Variety {
    pub pencil: PencilFamily,
    pub convention: AdjointConvention,
    pub omega: f64,
    /// Numerical radius below one is sufficient for a distinguished variety.
    pub omega_below_one: bool,
    pub check: CheckReport,
}

pub fn g2_variety_from_matrix(a: &CMatrix, convention: AdjointConvention) -> Result<G2Variety> {
    a.require_square()?;
    let f = match convention {
        AdjointConvention::APlusPAStar => a.adjoint(),
        AdjointConvention::AStarPlusPA => a.clone(),
    };
    let pencil = PencilFamily::new(vec![f])?;
    let omega = numerical_radius(a, 512)?;
    let check = validate_pencil(&pencil, &DiscGrid::default(), DEFAULT_TOL);
    Ok(G2Variety {
        pencil,
        convention,
        omega,
        omega_below_one: omega < 1.0,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::multiset_distance;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn nil() -> CMatrix {
        CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])
    }

    fn single(m: CMatrix) -> PencilFamily {
        PencilFamily::new(vec![m]).unwrap()
    }

    #[test]
    fn royal_type_curve() {
        let pf = single(CMatrix::zeros(1, 1));
        let s = sample_variety(&pf, &DiscGrid::new(4, 4).without_boundary(), 0).unwrap();
        assert_eq!(s.records.len(), 16);
        for r in &s.records {
            assert_eq!(r.fiber, vec![vec![c(0.0)]]);
            assert_eq!(r.classes[0].label, PointLabel::Interior);
        }
        assert_eq!(component_count(&s), 1);
    }

    #[test]
    fn square_root_curve_exits_through_torus() {
        let pf = single(nil());
        let s = sample_variety(&pf, &DiscGrid::new(6, 12), 0).unwrap();
        let at_one = s
            .records
            .iter()
            .find(|r| r.on_boundary && (r.p - c(1.0)).norm() < 1e-15)
            .unwrap();
        assert!(multiset_distance(&at_one.fiber, &[vec![c(1.0)], vec![c(-1.0)]]) < 1e-12);
        assert!(at_one
            .classes
            .iter()
            .all(|k| k.label == PointLabel::Distinguished));
        assert!(s.records.iter().all(|r| r.residual_ok.iter().all(|&b| b)));
        assert_eq!(component_count(&s), 1);
    }

    #[test]
    fn constant_fiber_value() {
        let pf = single(CMatrix::scalar(c(0.5)));
        let fb = fiber(&pf, c(0.2), 0).unwrap();
        assert!((fb[0][0] - c(0.6)).norm() < 1e-15);
    }

    #[test]
    fn two_lines_meet_on_the_circle() {
        // conj(a) + a p = conj(b) + b p forces |p| = 1
        let pf = single(CMatrix::from_diag(&[c(0.5), c(-0.4)]));
        let s = sample_variety(&pf, &DiscGrid::new(6, 12), 0).unwrap();
        assert_eq!(component_count(&s), 1);
        let mut g = DiscGrid::new(6, 32).without_boundary();
        g.epsilon = 0.5;
        let s = sample_variety(&pf, &g, 0).unwrap();
        assert_eq!(component_count(&s), 2);
    }

    #[test]
    fn csv_shape() {
        let pf = single(nil());
        let s = sample_variety(&pf, &DiscGrid::new(2, 3).without_boundary(), 0).unwrap();
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 1 + 6 * 2);
        assert!(csv.starts_with("re_p,im_p,branch,i,re_s,im_s,class,det_residual"));
    }

    #[test]
    fn polydisc_pullback() {
        let pf = single(nil());
        let pts = polydisc_sample(&pf, &DiscGrid::new(5, 8)).unwrap();
        assert!(!pts.is_empty());
        for q in &pts {
            assert!(q.consistent, "{q:?}");
            assert!(q.resym_residual < 1e-6);
        }
    }

    #[test]
    fn polydisc_points_by_hand() {
        let x = GammaPoint::new(vec![c(1.0)], c(0.25)).unwrap();
        let z = desymmetrize(&x).unwrap();
        assert!(z.iter().all(|w| (w - c(0.5)).norm() < 1e-7));
        let x = GammaPoint::new(vec![c(2.0)], c(1.0)).unwrap();
        assert!(desymmetrize(&x)
            .unwrap()
            .iter()
            .all(|w| (w - c(1.0)).norm() < 1e-7));
        let x = GammaPoint::new(vec![c(0.0), c(0.0)], c(0.0)).unwrap();
        assert!(desymmetrize(&x).unwrap().iter().all(|w| w.norm() < 1e-12));
    }

    #[test]
    fn separator_examples() {
        let pf = single(nil());
        let x = GammaPoint::new(vec![c(0.0)], c(0.5)).unwrap();
        assert_eq!(
            separating_poly(&pf, &x, 1e-9).unwrap(),
            Separation::Separated {
                index: 1,
                value: c(-0.5)
            }
        );
        let x = GammaPoint::new(vec![c(1.0)], c(1.0)).unwrap();
        assert!(matches!(
            separating_poly(&pf, &x, 1e-9).unwrap(),
            Separation::OnVariety { .. }
        ));
        let pf = single(CMatrix::zeros(1, 1));
        let x = GammaPoint::new(vec![c(0.3)], c(0.1)).unwrap();
        match separating_poly(&pf, &x, 1e-9).unwrap() {
            Separation::Separated { index: 1, value } => assert!((value - c(-0.3)).norm() < 1e-15),
            s => panic!("{s:?}"),
        }
        let x = GammaPoint::new(vec![c(3.0)], c(0.0)).unwrap();
        assert!(separating_poly(&pf, &x, 1e-9).is_err());
    }

    #[test]
    fn g2_examples() {
        let v =
            g2_variety_from_matrix(&CMatrix::zeros(2, 2), AdjointConvention::APlusPAStar).unwrap();
        assert!(v.omega_below_one && v.check.verdict.is_valid());
        let v = g2_variety_from_matrix(&nil(), AdjointConvention::APlusPAStar).unwrap();
        assert!((v.omega - 0.5).abs() < 1e-9);
        assert!(v.check.verdict.is_valid());
        assert_eq!(v.pencil.f(1), &nil().adjoint());
        let v =
            g2_variety_from_matrix(&CMatrix::identity(2), AdjointConvention::AStarPlusPA).unwrap();
        assert!((v.omega - 1.0).abs() < 1e-12 && !v.omega_below_one);
        assert!(!v.check.verdict.is_valid());
    }

    #[test]
    fn adjoint_family_conjugates_fibers() {
        let mut rng = rand::rng();
        let f = CMatrix::random(3, 3, &mut rng).scale_real(0.2);
        let pf = single(f);
        let p = C64::new(0.3, -0.4);
        let a = fiber(&pf.adjoint_family(), p, 0).unwrap();
        let b: Vec<Vec<C64>> = fiber(&pf, p.conj(), 0)
            .unwrap()
            .into_iter()
            .map(|v| v.into_iter().map(|z| z.conj()).collect())
            .collect();
        assert!(multiset_distance(&a, &b) < 1e-10);
    }
}
