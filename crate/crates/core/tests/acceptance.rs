//! Acceptance criteria 1-10. Runs as a plain binary (no libtest harness) so
//! that every criterion prints exactly one PASS/FAIL line with its runtime.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gammalab::corpus::{corpus, CorpusEntry};
use gammalab::gamma_geom::{
    canonical_c, classify_point, desymmetrize, symmetrize, GammaPoint, PointLabel, DEFAULT_TOL,
};
use gammalab::interplay::{counterexample_demo, pushforward_variety};
use gammalab::joint_spectrum::{joint_eigs, joint_eigs_oracle, MatrixTuple};
use gammalab::numerics::{multiset_distance, operator_norm, CMatrix, C64};
use gammalab::op_theory::{
    binomial, build_model, compress_model, coordinate_inclusion, dilation_check, fo_tuple,
    isometry_relations_check, FO_RANK_TOL,
};
use gammalab::variety::{
    sample_variety, separating_poly, DiscGrid, PencilFamily, Separation, COLLISION_RELAX, DET_TOL,
};
use gammalab::vn_check::{vn_experiment, VnConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Closed two-variable membership slack, written out independently:
/// `min(2 - |s|, 1 - |p|^2 - |s - conj(s) p|)`.
fn ay_slack(s: C64, p: C64) -> f64 {
    (2.0 - s.norm()).min(1.0 - p.norm_sqr() - (s - s.conj() * p).norm())
}

fn disc_point(rng: &mut ChaCha8Rng, closed: bool) -> C64 {
    let r: f64 = rng.random::<f64>().sqrt();
    let r = if closed && rng.random_bool(0.2) {
        1.0
    } else {
        r
    };
    C64::from_polar(r, rng.random_range(0.0..2.0 * PI))
}

fn c1_counterexample() -> Outcome {
    let r = counterexample_demo();
    // c_i = (s_i - conj(s_{n-i}) p) / (1 - |p|^2) by hand: (2 - 1.25)/0.75, (2.5 - 1)/0.75
    let x = GammaPoint::new(vec![c(2.0, 0.0), c(2.5, 0.0)], c(0.5, 0.0)).unwrap();
    let cc = canonical_c(&x, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let err = (cc[0] - c(1.0, 0.0))
        .norm()
        .max((cc[1] - c(2.0, 0.0)).norm());
    ensure(err <= 1e-12, || format!("canonical_c error {err:e}"))?;
    ensure(r.canonical_c_error <= 1e-12, || "report canonical_c".into())?;
    ensure(r.source_class.label == PointLabel::Exterior, || {
        format!("source classified {}", r.source_class.label)
    })?;
    ensure(r.images.len() == 360, || {
        format!("{} images", r.images.len())
    })?;
    for row in &r.images {
        let (s, p) = (c(row.s[0], row.s[1]), c(row.p[0], row.p[1]));
        ensure(row.label != PointLabel::Exterior, || {
            format!("image {} exterior", row.k)
        })?;
        ensure(ay_slack(s, p) >= -1e-12, || {
            format!("image {} fails the criterion", row.k)
        })?;
    }
    ensure(
        r.omega_one.s == [1.5, 0.0] && r.omega_one.ay_slack == 0.0,
        || "omega = 1 image".into(),
    )?;
    let m = &r.omega_minus_one;
    ensure(
        (m.s[0] + 1.0 / 6.0).abs() < 1e-15 && m.p == [-0.5, 0.0] && m.label == PointLabel::Interior,
        || format!("omega = -1 image {m:?}"),
    )?;
    Ok("canonical_c = (1, 2), 360/360 images non-EXTERIOR".into())
}

fn c2_ay_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let band = 10.0 * DEFAULT_TOL;
    let (mut tested, mut inside) = (0usize, 0usize);
    for _ in 0..100_000 {
        let s = C64::from_polar(
            2.3 * rng.random::<f64>().sqrt(),
            rng.random_range(0.0..2.0 * PI),
        );
        let p = C64::from_polar(
            1.15 * rng.random::<f64>().sqrt(),
            rng.random_range(0.0..2.0 * PI),
        );
        let slack = ay_slack(s, p);
        if slack.abs() <= band {
            continue;
        }
        tested += 1;
        let x = GammaPoint::new(vec![s], p).unwrap();
        let label = classify_point(&x, DEFAULT_TOL).label;
        let ours = label != PointLabel::Exterior;
        inside += ours as usize;
        ensure(ours == (slack > 0.0), || {
            format!("disagreement at s = {s}, p = {p}: {label} vs slack {slack:e}")
        })?;
    }
    Ok(format!("{tested} points agree ({inside} inside)"))
}

fn c3_symmetrization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        for k in 0..10_000 {
            let torus = k % 2 == 1;
            let z: Vec<C64> = (0..n)
                .map(|_| {
                    if torus {
                        C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
                    } else {
                        disc_point(&mut rng, false)
                    }
                })
                .collect();
            let x = symmetrize(&z).map_err(|e| e.to_string())?;
            let want = if torus {
                PointLabel::Distinguished
            } else {
                PointLabel::Interior
            };
            let got = classify_point(&x, DEFAULT_TOL).label;
            ensure(got == want, || {
                format!("n = {n}, z = {z:?}: {got}, expected {want}")
            })?;
            let back = desymmetrize(&x).map_err(|e| e.to_string())?;
            let a: Vec<Vec<C64>> = z.iter().map(|&w| vec![w]).collect();
            let b: Vec<Vec<C64>> = back.iter().map(|&w| vec![w]).collect();
            let d = multiset_distance(&a, &b);
            worst = worst.max(d);
            ensure(d <= 1e-8, || format!("round trip error {d:e} at n = {n}"))?;
        }
    }
    Ok(format!(
        "40000 points per class, worst round trip {worst:.1e}"
    ))
}

/// `T_i = Q q_i(U) Q^*` with `U` upper triangular and `q_i` random
/// polynomials: commuting, non-normal, joint eigenvalues `(q_i(u_jj))_i`.
fn seeded_tuple(seed: u64) -> (MatrixTuple, Vec<Vec<C64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(2..=6);
    let k = rng.random_range(1..=4);
    let mut u = CMatrix::random(m, m, &mut rng);
    for i in 0..m {
        for j in 0..i {
            u[(i, j)] = c(0.0, 0.0);
        }
    }
    let q = CMatrix::random_unitary(m, &mut rng);
    let mut mats = Vec::new();
    let mut coeffs = Vec::new();
    for _ in 0..k {
        let a: Vec<C64> = (0..3)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let u2 = &u * &u;
        let t = &(&CMatrix::identity(m).scale(a[0]) + &u.scale(a[1])) + &u2.scale(a[2]);
        mats.push(&(&q * &t) * &q.adjoint());
        coeffs.push(a);
    }
    let truth = (0..m)
        .map(|j| {
            let l = u[(j, j)];
            coeffs
                .iter()
                .map(|a| a[0] + a[1] * l + a[2] * l * l)
                .collect()
        })
        .collect();
    (
        MatrixTuple::new(mats).expect("commuting by construction"),
        truth,
    )
}

fn dedup(points: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for p in points {
        let close = |q: &Vec<C64>| q.iter().zip(p).all(|(a, b)| (a - b).norm() <= tol);
        if !out.iter().any(close) {
            out.push(p.clone());
        }
    }
    out
}

fn hausdorff(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    let d = |x: &Vec<C64>, y: &Vec<C64>| {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max)
    };
    let one = |a: &[Vec<C64>], b: &[Vec<C64>]| {
        a.iter()
            .map(|x| b.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

fn c4_joint_spectrum() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..200 {
        let (t, truth) = seeded_tuple(seed);
        let js = joint_eigs(&t, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let oracle = joint_eigs_oracle(&t).map_err(|e| format!("seed {seed} oracle: {e}"))?;
        let d_truth = multiset_distance(&js.points, &truth);
        let d_oracle = hausdorff(&dedup(&js.points, 1e-6), &oracle);
        worst = worst.max(d_truth).max(d_oracle);
        ensure(d_truth <= 1e-6 && d_oracle <= 1e-6, || {
            format!("seed {seed}: vs truth {d_truth:e}, vs oracle {d_oracle:e}")
        })?;
    }
    Ok(format!("200/200 tuples, worst distance {worst:.1e}"))
}

fn c5_distinguished_exit(all: &[CorpusEntry]) -> Outcome {
    let grid = DiscGrid::default();
    let mut fibers = 0;
    let mut worst_rel: f64 = 0.0;
    for e in all {
        let pf = &e.pencil;
        let n = pf.n();
        let s = sample_variety(pf, &grid, 0).map_err(|x| x.to_string())?;
        ensure(s.failures() == 0, || {
            format!("{}: {} fiber failures", e.name, s.failures())
        })?;
        for (r, k) in s.points() {
            fibers += 1;
            let label = r.classes[k].label;
            if r.on_boundary {
                let pt = &r.fiber[k];
                let rel = (1..n)
                    .map(|i| (pt[i - 1] - pt[n - i - 1].conj() * r.p).norm())
                    .fold(0.0, f64::max);
                worst_rel = worst_rel.max(rel);
                ensure(label == PointLabel::Distinguished && rel <= 1e-6, || {
                    format!("{}: p = {}, {label}, relation {rel:e}", e.name, r.p)
                })?;
            } else {
                ensure(r.p.norm() <= 0.999 + 1e-15, || "grid radius".into())?;
                ensure(label == PointLabel::Interior, || {
                    format!("{}: p = {}, {label}", e.name, r.p)
                })?;
            }
        }
    }
    Ok(format!(
        "{} pencils, {fibers} points, worst relation {worst_rel:.1e}",
        all.len()
    ))
}

/// Compression of the K-block model to K' blocks: `D_P` is the projection on
/// the last block and the fundamental tuple is `F_i^*` there.
fn expected_fo(pf: &PencilFamily, kp: usize, i: usize) -> CMatrix {
    let d = pf.d();
    let mut m = CMatrix::zeros(kp * d, kp * d);
    m.set_block((kp - 1) * d, (kp - 1) * d, &pf.f(i).adjoint());
    m
}

fn last_block_projection(d: usize, kp: usize) -> CMatrix {
    let mut m = CMatrix::zeros(kp * d, kp * d);
    m.set_block((kp - 1) * d, (kp - 1) * d, &CMatrix::identity(d));
    m
}

fn c6_fo_tuple(all: &[CorpusEntry]) -> Outcome {
    let (mut worst_res, mut worst_lift, mut worst_ratio) = (0.0f64, 0.0f64, 0.0f64);
    for e in all {
        let pf = &e.pencil;
        let n = pf.n();
        let m = build_model(pf, 5).map_err(|x| x.to_string())?;
        for kp in [2, 3, 4] {
            let t = compress_model(&m, kp).map_err(|x| x.to_string())?;
            let fo = fo_tuple(&t, FO_RANK_TOL).map_err(|x| format!("{}: {x}", e.name))?;
            for i in 1..n {
                // independent reconstruction with the known D_P
                let dp = last_block_projection(pf.d(), kp);
                let lhs = t.s_i(i) - &(&t.s_i(n - i).adjoint() * t.p());
                let rec = &(&dp * &fo.lifted(i)) * &dp;
                let res = operator_norm(&(&lhs - &rec));
                let lift = (&fo.lifted(i) - &expected_fo(pf, kp, i)).max_abs();
                worst_res = worst_res.max(res).max(fo.residuals[i - 1]);
                worst_lift = worst_lift.max(lift);
                ensure(
                    res <= 1e-8 && fo.residuals[i - 1] <= 1e-8 && lift <= 1e-8,
                    || {
                        format!(
                            "{} K'={kp} i={i}: residual {res:e}, lift error {lift:e}",
                            e.name
                        )
                    },
                )?;
            }
            for w in &fo.omega_report {
                let b = binomial(n, w.i);
                worst_ratio = worst_ratio.max(w.max_omega / b);
                ensure(w.max_omega <= b + 1e-6, || {
                    format!("{} K'={kp}: omega {} > {b}", e.name, w.max_omega)
                })?;
            }
        }
    }
    Ok(format!(
        "residual {worst_res:.1e}, lift error {worst_lift:.1e}, max omega/C(n,i) {worst_ratio:.3}"
    ))
}

fn c7_model_identities(all: &[CorpusEntry]) -> Outcome {
    let (mut worst_def, mut worst_dil) = (0.0f64, 0.0f64);
    for e in all {
        for k in [3, 5, 6] {
            let m = build_model(&e.pencil, k).map_err(|x| x.to_string())?;
            let d = isometry_relations_check(&m);
            let r = d.restricted.iter().fold(0.0f64, |a, &b| a.max(b));
            worst_def = worst_def.max(r);
            ensure(r <= 1e-12, || {
                format!("{} K={k}: restricted defect {r:e}", e.name)
            })?;
            for kp in 2..k {
                let t = compress_model(&m, kp).map_err(|x| x.to_string())?;
                let emb = coordinate_inclusion(m.dim(), t.dim());
                let dil = dilation_check(&t, &m, &emb, k - kp).map_err(|x| x.to_string())?;
                worst_dil = worst_dil.max(dil.max_residual);
                ensure(dil.max_residual <= 1e-10, || {
                    format!(
                        "{} K={k} K'={kp}: dilation {:e} at {:?}",
                        e.name, dil.max_residual, dil.worst_alpha
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "restricted defect {worst_def:.1e}, dilation {worst_dil:.1e}"
    ))
}

fn c8_von_neumann(all: &[CorpusEntry]) -> Outcome {
    let mut trials = 0;
    let mut min_margin = f64::INFINITY;
    for e in all {
        let t = compress_model(&build_model(&e.pencil, 5).unwrap(), 4).unwrap();
        for block_order in [1, 2] {
            let cfg = VnConfig {
                trials: 100,
                max_degree: 4,
                block_order,
                grid: DiscGrid::new(24, 64).with_boundary_refine(4),
                tol: 1e-6,
                seed: 1000 * block_order as u64,
                ..Default::default()
            };
            let r = vn_experiment(&t, None, &cfg).map_err(|x| format!("{}: {x}", e.name))?;
            trials += r.trials.len();
            min_margin = min_margin.min(r.min_margin);
            ensure(r.violations == 0, || {
                format!(
                    "{} block {block_order}: {} violations, min margin {:e}",
                    e.name, r.violations, r.min_margin
                )
            })?;
        }
    }
    Ok(format!(
        "{trials} trials, 0 violations, min margin {min_margin:.2e}"
    ))
}

fn c9_pushforward(all: &[CorpusEntry]) -> Outcome {
    let mut count = 0;
    let mut max_omega: f64 = 0.0;
    for e in all.iter().filter(|e| e.pencil.n() == 3) {
        let r = pushforward_variety(&e.pencil).map_err(|x| x.to_string())?;
        count += 1;
        max_omega = max_omega.max(r.omega);
        ensure(r.omega < 1.0, || format!("{}: omega {}", e.name, r.omega))?;
        ensure(r.images.pass, || format!("{}: {:?}", e.name, r.images))?;
        ensure(r.g2.check.verdict.is_valid(), || {
            format!("{}: {:?}", e.name, r.g2.check.verdict)
        })?;
    }
    Ok(format!("{count} pencils, max omega {max_omega:.3}"))
}

fn random_closed_point(rng: &mut ChaCha8Rng, n: usize) -> GammaPoint {
    let z: Vec<C64> = (0..n).map(|_| disc_point(rng, true)).collect();
    symmetrize(&z).unwrap()
}

fn c10_separator(all: &[CorpusEntry]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grid = DiscGrid::new(6, 16);
    let (mut off, mut on) = (0, 0);
    for e in all {
        let pf = &e.pencil;
        let tol = DET_TOL * pf.det_scale();
        for _ in 0..1000 {
            let x = random_closed_point(&mut rng, pf.n());
            match separating_poly(pf, &x, tol).map_err(|x| x.to_string())? {
                Separation::Separated { index, value } => {
                    ensure(index >= 1 && index < pf.n() && value.norm() > tol, || {
                        "bad index".into()
                    })?;
                }
                Separation::OnVariety { max_abs } => {
                    return Err(format!(
                        "{}: random point {x:?} on variety ({max_abs:e})",
                        e.name
                    ));
                }
            }
            off += 1;
        }
        let s = sample_variety(pf, &grid, 0).map_err(|x| x.to_string())?;
        for (r, k) in s.points() {
            let x = GammaPoint::new(r.fiber[k].clone(), r.p).unwrap();
            let relaxed = tol * COLLISION_RELAX;
            let res = separating_poly(pf, &x, relaxed).map_err(|x| x.to_string())?;
            ensure(matches!(res, Separation::OnVariety { .. }), || {
                format!(
                    "{}: sampled point at p = {} separated: {res:?}",
                    e.name, r.p
                )
            })?;
            on += 1;
        }
    }
    Ok(format!(
        "{off} off-variety points separated, {on} sampled points on-variety"
    ))
}

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let all = corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "counterexample reproduction",
            Duration::from_secs(1),
            Box::new(c1_counterexample),
        ),
        (
            "n=2 membership vs closed criterion",
            Duration::from_secs(10),
            Box::new(c2_ay_agreement),
        ),
        (
            "symmetrization consistency",
            Duration::from_secs(30),
            Box::new(c3_symmetrization),
        ),
        (
            "joint spectrum vs oracle",
            Duration::from_secs(60),
            Box::new(c4_joint_spectrum),
        ),
        (
            "distinguished exit",
            Duration::from_secs(120),
            Box::new(|| c5_distinguished_exit(&all)),
        ),
        (
            "fundamental tuple residual and omega bound",
            Duration::from_secs(60),
            Box::new(|| c6_fo_tuple(&all)),
        ),
        (
            "model identities",
            Duration::from_secs(60),
            Box::new(|| c7_model_identities(&all)),
        ),
        (
            "von Neumann inequality",
            Duration::from_secs(600),
            Box::new(|| c8_von_neumann(&all)),
        ),
        (
            "pushforward",
            Duration::from_secs(60),
            Box::new(|| c9_pushforward(&all)),
        ),
        (
            "separator",
            Duration::from_secs(30),
            Box::new(|| c10_separator(&all)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let over = took > *budget;
        let status = match (&outcome, over) {
            (Ok(_), false) => "PASS",
            _ => "FAIL",
        };
        if status == "FAIL" {
            failed += 1;
        }
        let detail = match &outcome {
            Ok(s) if over => format!("{s}; over budget {budget:?}"),
            Ok(s) => s.clone(),
            Err(s) => s.clone(),
        };
        println!(
            "criterion {:>2} {status} [{:>8.3}s] {name}: {detail}",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
