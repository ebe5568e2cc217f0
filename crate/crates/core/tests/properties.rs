//! Property tests. Most strategies draw a seed and build the random object
//! from it, which keeps shrinking cheap and failures reproducible.

use std::f64::consts::PI;

use gammalab::gamma_geom::{
    canonical_c, classify_point, desymmetrize, elementary_symmetric, symmetrize, GammaPoint,
    PointLabel, DEFAULT_TOL,
};
use gammalab::interplay::project32;
use gammalab::joint_spectrum::{joint_eigs, MatrixTuple};
use gammalab::numerics::{
    eigenvalues, hermitian_sqrt_and_pinv, horner, inverse, multiset_distance, numerical_radius,
    operator_norm, poly_roots, schur, CMatrix, C64,
};
use gammalab::op_theory::{
    build_model, classify_tuple, compress_model, fo_tuple, Evidence, OperatorTuple, TupleLabel,
    FO_RANK_TOL,
};
use gammalab::variety::{
    fiber, g2_variety_from_matrix, sample_variety, AdjointConvention, DiscGrid, PencilFamily,
};
use gammalab::vn_check::{random_poly, refine_boundary_sup, sampled_sup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(r: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, r.random_range(0.0..2.0 * PI))
}

fn in_disc(r: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(r.random::<f64>().sqrt(), r.random_range(0.0..2.0 * PI))
}

fn as_points(v: &[C64]) -> Vec<Vec<C64>> {
    v.iter().map(|&z| vec![z]).collect()
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn schur_reconstructs(seed: u64, n in 1usize..=16) {
        let m = CMatrix::random(n, n, &mut rng(seed));
        let s = schur(&m, 0.0).unwrap();
        let back = &(&s.unitary * &s.triangular) * &s.unitary.adjoint();
        prop_assert!(operator_norm(&(&back - &m)) <= 1e-10 * operator_norm(&m));
        prop_assert!(s.triangular.strict_lower_norm() == 0.0);
    }

    #[test]
    fn norm_is_unitarily_invariant(seed: u64, n in 1usize..=8) {
        let mut r = rng(seed);
        let m = CMatrix::random(n, n, &mut r);
        let u = CMatrix::random_unitary(n, &mut r);
        let v = CMatrix::random_unitary(n, &mut r);
        let umv = &(&u * &m) * &v;
        prop_assert!((operator_norm(&umv) - operator_norm(&m)).abs() <= 1e-10 * (1.0 + operator_norm(&m)));
    }

    #[test]
    fn numerical_radius_between_half_norm_and_norm(seed: u64, n in 1usize..=8) {
        let m = CMatrix::random(n, n, &mut rng(seed));
        let w = numerical_radius(&m, 256).unwrap();
        let norm = operator_norm(&m);
        prop_assert!(w >= norm / 2.0 - 1e-10 && w <= norm + 1e-10);
    }

    #[test]
    fn hermitian_sqrt_squares_back(seed: u64, n in 1usize..=8, rank in 0usize..=8) {
        let mut r = rng(seed);
        let b = CMatrix::random(n, rank.min(n), &mut r);
        let m = &b * &b.adjoint();
        let sp = hermitian_sqrt_and_pinv(&m, 1e-10 * (1.0 + operator_norm(&m))).unwrap();
        let scale = 1.0 + operator_norm(&m);
        prop_assert!(operator_norm(&(&(&sp.sqrt * &sp.sqrt) - &m)) <= 1e-10 * scale);
        let proj = &sp.range_basis * &sp.range_basis.adjoint();
        prop_assert!(operator_norm(&(&(&sp.sqrt * &sp.pinv_of_sqrt) - &proj)) <= 1e-8);
    }

    #[test]
    fn roots_are_roots(seed: u64, deg in 1usize..=10) {
        let mut r = rng(seed);
        let coeffs: Vec<C64> = (0..deg).map(|_| C64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0))).collect();
        let full: Vec<C64> = std::iter::once(C64::new(1.0, 0.0)).chain(coeffs.iter().copied()).collect();
        let scale: f64 = full.iter().map(|c| c.norm()).sum();
        for z in poly_roots(&coeffs, true).unwrap() {
            let zs = z.norm().max(1.0).powi(deg as i32);
            prop_assert!(horner(&full, z).norm() <= 1e-8 * scale * zs);
        }
    }

    #[test]
    fn open_polydisc_maps_inside(seed: u64, n in 2usize..=5) {
        let mut r = rng(seed);
        let z: Vec<C64> = (0..n).map(|_| in_disc(&mut r)).collect();
        prop_assert_eq!(classify_point(&symmetrize(&z).unwrap(), DEFAULT_TOL).label, PointLabel::Interior);
    }

    #[test]
    fn torus_maps_to_distinguished_boundary(seed: u64, n in 2usize..=5) {
        let mut r = rng(seed);
        let z: Vec<C64> = (0..n).map(|_| unit(&mut r)).collect();
        prop_assert_eq!(classify_point(&symmetrize(&z).unwrap(), DEFAULT_TOL).label, PointLabel::Distinguished);
    }

    #[test]
    fn desymmetrize_inverts(seed: u64, n in 1usize..=6) {
        let mut r = rng(seed);
        let z: Vec<C64> = (0..n).map(|_| C64::new(r.random_range(-1.5..1.5), r.random_range(-1.5..1.5))).collect();
        if n == 1 {
            return Ok(());
        }
        let back = desymmetrize(&symmetrize(&z).unwrap()).unwrap();
        prop_assert!(multiset_distance(&as_points(&z), &as_points(&back)) <= 1e-8);
    }

    #[test]
    fn boundary_reflection_keeps_label(seed: u64, n in 2usize..=5, mixed in 0usize..=5) {
        // |p| = 1 points: some roots on the circle, the rest anywhere
        let mut r = rng(seed);
        let z: Vec<C64> = (0..n)
            .map(|k| if k < mixed { unit(&mut r) } else { C64::from_polar(r.random_range(0.5..2.0), r.random_range(0.0..2.0 * PI)) })
            .collect();
        let e = elementary_symmetric(&z);
        let p = e[n - 1] / e[n - 1].norm();
        let x = GammaPoint::new(e[..n - 1].to_vec(), p).unwrap();
        let refl: Vec<C64> = (1..n).map(|i| x.s()[n - i - 1].conj() * p).collect();
        let y = GammaPoint::new(refl, p).unwrap();
        prop_assert_eq!(classify_point(&x, DEFAULT_TOL).label, classify_point(&y, DEFAULT_TOL).label);
    }
}

#[test]
fn two_variable_membership_matches_closed_criterion() {
    let mut r = rng(21);
    for _ in 0..100_000 {
        let s = C64::from_polar(
            3.0 * r.random::<f64>().sqrt(),
            r.random_range(0.0..2.0 * PI),
        );
        let p = C64::from_polar(
            1.2 * r.random::<f64>().sqrt(),
            r.random_range(0.0..2.0 * PI),
        );
        let slack = (2.0 - s.norm()).min(1.0 - p.norm_sqr() - (s - s.conj() * p).norm());
        if slack.abs() < 10.0 * DEFAULT_TOL {
            continue;
        }
        let inside = classify_point(&GammaPoint::new(vec![s], p).unwrap(), DEFAULT_TOL).label
            != PointLabel::Exterior;
        assert_eq!(inside, slack > 0.0, "s = {s}, p = {p}");
    }
}

/// Commuting tuple: polynomials in one random matrix.
fn commuting(seed: u64, m: usize, k: usize) -> Vec<CMatrix> {
    let mut r = rng(seed);
    let a = CMatrix::random(m, m, &mut r);
    (0..k)
        .map(|_| {
            let c0 = C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            let c1 = C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            &CMatrix::identity(m).scale(c0) + &a.scale(c1)
        })
        .collect()
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn joint_spectrum_permutes_with_the_tuple(seed: u64, m in 2usize..=6, k in 2usize..=4) {
        let mats = commuting(seed, m, k);
        let js = joint_eigs(&MatrixTuple::new(mats.clone()).unwrap(), 0).unwrap();
        let rev: Vec<CMatrix> = mats.iter().rev().cloned().collect();
        let jr = joint_eigs(&MatrixTuple::new(rev).unwrap(), 0).unwrap();
        let flipped: Vec<Vec<C64>> = jr.points.iter().map(|p| p.iter().rev().copied().collect()).collect();
        prop_assert!(multiset_distance(&js.points, &flipped) <= 1e-8);
    }

    #[test]
    fn joint_spectrum_similarity_invariant(seed: u64, m in 2usize..=6, k in 1usize..=4) {
        let mats = commuting(seed, m, k);
        let mut r = rng(seed ^ 0x5eed);
        let w = &CMatrix::identity(m).scale(C64::new(2.0, 0.0)) + &CMatrix::random(m, m, &mut r).scale_real(0.3);
        let wi = inverse(&w).unwrap();
        let cond = operator_norm(&w) * operator_norm(&wi);
        let sim: Vec<CMatrix> = mats.iter().map(|t| &(&wi * t) * &w).collect();
        let a = joint_eigs(&MatrixTuple::new(mats).unwrap(), 0).unwrap();
        let b = joint_eigs(&MatrixTuple::with_tol(sim, 1e-8).unwrap(), 0).unwrap();
        prop_assert!(multiset_distance(&a.points, &b.points) <= 1e-8 * cond);
    }

    #[test]
    fn joint_spectrum_slots_are_eigenvalues(seed: u64, m in 2usize..=6, k in 1usize..=4) {
        let mats = commuting(seed, m, k);
        let js = joint_eigs(&MatrixTuple::new(mats.clone()).unwrap(), 0).unwrap();
        for (i, t) in mats.iter().enumerate() {
            let slot: Vec<C64> = js.points.iter().map(|p| p[i]).collect();
            let ev = eigenvalues(t).unwrap();
            prop_assert!(multiset_distance(&as_points(&slot), &as_points(&ev)) <= 1e-8);
        }
    }
}

/// Random commuting pencil family satisfying the starred condition:
/// simultaneously unitarily diagonal, then scaled.
fn random_family(seed: u64, n: usize, d: usize) -> PencilFamily {
    let mut r = rng(seed);
    let u = CMatrix::random_unitary(d, &mut r);
    let f = (1..n)
        .map(|_| {
            let diag: Vec<C64> = (0..d).map(|_| in_disc(&mut r).scale(0.45)).collect();
            &(&u * &CMatrix::from_diag(&diag)) * &u.adjoint()
        })
        .collect();
    PencilFamily::new(f).unwrap()
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn fibers_satisfy_the_determinants(seed: u64, n in 2usize..=3, d in 1usize..=3) {
        let pf = random_family(seed, n, d);
        let s = sample_variety(&pf, &DiscGrid::new(6, 16), 0).unwrap();
        for rec in &s.records {
            prop_assert!(rec.fiber.len() <= d);
            for (k, pt) in rec.fiber.iter().enumerate() {
                let vals = pf.defining_values(pt, rec.p).unwrap();
                for (i, v) in vals.iter().enumerate() {
                    let bound = 1e-6 * (1.0 + operator_norm(pf.f(i + 1))).powi(d as i32);
                    prop_assert!(v.norm() <= bound, "node {} point {k} f_{}: {}", rec.p, i + 1, v.norm());
                }
            }
        }
    }

    #[test]
    fn adjoint_family_fiber_is_conjugate(seed: u64, n in 2usize..=3, d in 1usize..=3) {
        let mut r = rng(seed);
        let pf = random_family(seed, n, d);
        let p = in_disc(&mut r);
        let a = fiber(&pf.adjoint_family(), p, 0).unwrap();
        let b: Vec<Vec<C64>> = fiber(&pf, p.conj(), 0).unwrap()
            .iter()
            .map(|pt| pt.iter().map(|z| z.conj()).collect())
            .collect();
        prop_assert!(multiset_distance(&a, &b) <= 1e-8);
    }

    #[test]
    fn small_numerical_radius_is_never_invalid(seed: u64, d in 1usize..=3, w in 0.05f64..0.95) {
        let m = CMatrix::random(d, d, &mut rng(seed));
        let a = m.scale_real(w / numerical_radius(&m, 512).unwrap());
        for conv in [AdjointConvention::APlusPAStar, AdjointConvention::AStarPlusPA] {
            let g = g2_variety_from_matrix(&a, conv).unwrap();
            prop_assert!(g.omega_below_one);
            prop_assert!(!g.check.verdict.is_invalid(), "{:?}", g.check.verdict);
        }
    }

    #[test]
    fn fo_of_scalar_point_is_canonical_c(seed: u64) {
        let mut r = rng(seed);
        let x = symmetrize(&[in_disc(&mut r), in_disc(&mut r)]).unwrap();
        let fo = fo_tuple(&OperatorTuple::scalar(&x), FO_RANK_TOL).unwrap();
        let c = canonical_c(&x, DEFAULT_TOL).unwrap();
        prop_assert!((fo.a[0][(0, 0)] - c[0]).norm() <= 1e-10);
    }

    #[test]
    fn projected_images_stay_inside(seed: u64) {
        let mut r = rng(seed);
        let x = symmetrize(&[in_disc(&mut r), unit(&mut r), in_disc(&mut r)]).unwrap();
        for k in 0..32 {
            let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / 32.0);
            prop_assert_ne!(classify_point(&project32(&x, w).unwrap(), DEFAULT_TOL).label, PointLabel::Exterior);
        }
    }
}

#[test]
fn projection_at_scale() {
    let mut r = rng(62);
    for _ in 0..10_000 {
        let z: Vec<C64> = (0..3)
            .map(|_| {
                if r.random_bool(0.3) {
                    unit(&mut r)
                } else {
                    in_disc(&mut r)
                }
            })
            .collect();
        let x = symmetrize(&z).unwrap();
        for k in 0..32 {
            let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / 32.0);
            let y = project32(&x, w).unwrap();
            assert_ne!(
                classify_point(&y, DEFAULT_TOL).label,
                PointLabel::Exterior,
                "z = {z:?}, k = {k}"
            );
        }
    }
}

#[test]
fn commuting_unitaries_are_gamma_unitary() {
    let mut r = rng(7);
    let ev = Evidence {
        trials: 2,
        torus_budget: 1 << 12,
        ..Default::default()
    };
    for n in [2usize, 3] {
        for _ in 0..50 {
            let m = r.random_range(1..=4);
            let q = CMatrix::random_unitary(m, &mut r);
            let us: Vec<CMatrix> = (0..n)
                .map(|_| {
                    let d: Vec<C64> = (0..m).map(|_| unit(&mut r)).collect();
                    &(&q * &CMatrix::from_diag(&d)) * &q.adjoint()
                })
                .collect();
            let mut e = vec![CMatrix::identity(m)];
            e.extend((0..n).map(|_| CMatrix::zeros(m, m)));
            for x in &us {
                for j in (1..=n).rev() {
                    e[j] = &e[j] + &(&e[j - 1] * x);
                }
            }
            let t = OperatorTuple::new(e[1..n].to_vec(), e[n].clone()).unwrap();
            assert_eq!(classify_tuple(&t, &ev).label, TupleLabel::GammaUnitary);
        }
    }
}

#[test]
fn adjoint_of_contraction_evidence_is_not_refuted() {
    let ev = Evidence {
        trials: 6,
        torus_budget: 1 << 14,
        ..Default::default()
    };
    for e in gammalab::corpus::corpus() {
        let t = compress_model(&build_model(&e.pencil, 4).unwrap(), 3).unwrap();
        let c = classify_tuple(&t, &ev);
        assert_eq!(c.label, TupleLabel::ContractionEvidence, "{}", e.name);
        let comps = t.components();
        let adj: Vec<CMatrix> = t.adjoint().components();
        for k in 0..ev.trials as u64 {
            // ‖f(T)‖ = ‖f̃(T^*)‖ where f̃ has conjugated coefficients
            let f = random_poly(t.n(), ev.max_degree, 1, k).unwrap();
            let lhs = operator_norm(&f.eval_tuple(&comps).unwrap());
            let lhs_adj = operator_norm(&f.conj_coefficients().eval_tuple(&adj).unwrap());
            assert!((lhs - lhs_adj).abs() <= 1e-10 * (1.0 + lhs));
        }
        assert_ne!(
            classify_tuple(&t.adjoint(), &ev).label,
            TupleLabel::Refuted,
            "{}",
            e.name
        );
    }
}

proptest! {
    #![proptest_config(cfg(16))]

    #[test]
    fn rhs_grows_under_refinement(seed: u64, idx in 0usize..12) {
        let pf = gammalab::corpus::corpus()[idx].pencil.clone();
        let f = random_poly(pf.n(), 3, 1, seed).unwrap();
        // nested: radii (R-1) | (R'-1), angles A | A'
        let coarse = sample_variety(&pf, &DiscGrid::new(5, 16), 0).unwrap();
        let fine = sample_variety(&pf, &DiscGrid::new(9, 32), 0).unwrap();
        prop_assert!(sampled_sup(&f, &fine, false) >= sampled_sup(&f, &coarse, false) - 1e-12);
    }

    #[test]
    fn rhs_and_lhs_scale_together(seed: u64, idx in 0usize..12, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let e = &gammalab::corpus::corpus()[idx];
        let t = compress_model(&build_model(&e.pencil, 4).unwrap(), 3).unwrap();
        let lambda = C64::new(re, im);
        let f = random_poly(t.n(), 3, 1, seed).unwrap();
        let g = f.scale(lambda);
        let s = sample_variety(&e.pencil, &DiscGrid::new(4, 16), 0).unwrap();
        let comps = t.components();
        let (lf, lg) = (operator_norm(&f.eval_tuple(&comps).unwrap()), operator_norm(&g.eval_tuple(&comps).unwrap()));
        let (rf, rg) = (sampled_sup(&f, &s, false), sampled_sup(&g, &s, false));
        let a = lambda.norm();
        prop_assert!((lg - a * lf).abs() <= 1e-12 * (1.0 + a * lf));
        prop_assert!((rg - a * rf).abs() <= 1e-12 * (1.0 + a * rf));
        let bf = refine_boundary_sup(&f, &e.pencil, &s, 2, 0);
        let bg = refine_boundary_sup(&g, &e.pencil, &s, 2, 0);
        prop_assert!((bg - a * bf).abs() <= 1e-9 * (1.0 + a * bf));
    }

    #[test]
    fn conjugated_evaluation_on_adjoint_variety(seed: u64, idx in 0usize..12) {
        let pf = gammalab::corpus::corpus()[idx].pencil.clone();
        let f = random_poly(pf.n(), 3, 1, seed).unwrap();
        // the polar grid is closed under conjugation, so the two samples coincide
        let grid = DiscGrid::new(6, 32);
        let direct = sampled_sup(&f, &sample_variety(&pf, &grid, 0).unwrap(), false);
        let star = sampled_sup(&f, &sample_variety(&pf.adjoint_family(), &grid, 0).unwrap(), true);
        prop_assert!((direct - star).abs() <= 1e-8 * (1.0 + direct));
    }
}
