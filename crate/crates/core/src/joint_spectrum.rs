//! Joint spectrum of commuting matrix tuples.
//!
//! The primary route Schur-factors a random linear combination of the tuple;
//! for commuting matrices the resulting unitary generically triangularizes
//! every member, and the joint spectrum is read off the simultaneous diagonals
//! (with diagonal-coefficient multiplicity). When the combination is not
//! generic enough a staircase recursion finds one joint eigenvector at a time
//! by intersecting eigenspaces and deflates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{mat_from_wire, mat_to_wire, WireMatrix};
use crate::numerics::{
    eigenvalues, hermitian_eigen, operator_norm, schur, CMatrix, C64, ONE, ZERO,
};

pub const DEFAULT_COMM_TOL: f64 = 1e-10;
/// Off-triangular mass allowed per matrix, relative to its norm.
pub const TRIANGULAR_TOL: f64 = 1e-8;
const GENERIC_ATTEMPTS: usize = 9;
pub const ORACLE_MAX_ORDER: usize = 8;

#[derive(Clone, Debug)]
pub struct MatrixTuple {
    mats: Vec<CMatrix>,
    order: usize,
    pub comm_tol: f64,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        Self::with_tol(mats, DEFAULT_COMM_TOL)
    }

    pub fn with_tol(mats: Vec<CMatrix>, comm_tol: f64) -> Result<Self> {
        let order = match mats.first() {
            Some(m) => m.require_square()?,
            None => return Err(Error::InvalidArgument("empty matrix tuple".into())),
        };
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != order || m.cols() != order {
                return Err(Error::Dimension(format!(
                    "matrix {i} is {}x{}, expected {order}x{order}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_finite() {
                return Err(Error::NonFinite { row: 0, col: 0 });
            }
        }
        Ok(MatrixTuple {
            mats,
            order,
            comm_tol,
        })
    }

    pub fn k(&self) -> usize {
        self.mats.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<CMatrix> {
        self.mats
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    /// `norms[i][j] = ‖T_i T_j - T_j T_i‖`.
    pub norms: Vec<Vec<f64>>,
    pub worst: f64,
    pub threshold: f64,
    pub pass: bool,
}

pub fn verify_commuting(t: &MatrixTuple) -> CommutatorReport {
    commutator_report(t.mats(), t.comm_tol)
}

pub(crate) fn commutator_report(mats: &[CMatrix], comm_tol: f64) -> CommutatorReport {
    let k = mats.len();
    let max_norm = mats.iter().map(operator_norm).fold(0.0, f64::max);
    let threshold = comm_tol * max_norm * max_norm;
    let mut norms = vec![vec![0.0; k]; k];
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let c = operator_norm(&mats[i].commutator(&mats[j]).expect("same order"));
            norms[i][j] = c;
            norms[j][i] = c;
            worst = worst.max(c);
        }
    }
    CommutatorReport {
        norms,
        worst,
        threshold,
        pass: worst <= threshold,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Triangularization {
    GenericCombination { attempts: usize },
    Staircase,
}

#[derive(Clone, Debug)]
pub struct JointSpectrum {
    /// Simultaneous diagonal entries, one k-tuple per diagonal position.
    pub points: Vec<Vec<C64>>,
    /// Per point: worst (over the tuple) mass of `T_i q_j` outside `span(q_1..q_j)`.
    pub residuals: Vec<f64>,
    pub triangularizer: CMatrix,
    pub method: Triangularization,
}

fn triangular_check(mats: &[CMatrix], q: &CMatrix) -> (Vec<CMatrix>, bool, f64) {
    let qa = q.adjoint();
    let mut ok = true;
    let mut worst_rel: f64 = 0.0;
    let tri: Vec<CMatrix> = mats
        .iter()
        .map(|m| {
            let u = &(&qa * m) * q;
            let off = u.strict_lower_norm();
            let scale = m.frobenius_norm();
            if off > TRIANGULAR_TOL * scale {
                ok = false;
            }
            if scale > 0.0 {
                worst_rel = worst_rel.max(off / scale);
            } else if off > 0.0 {
                worst_rel = f64::INFINITY;
            }
            u
        })
        .collect();
    (tri, ok, worst_rel)
}

fn assemble(tri: &[CMatrix], q: CMatrix, method: Triangularization) -> JointSpectrum {
    let n = q.rows();
    let mut points = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for j in 0..n {
        points.push(tri.iter().map(|u| u[(j, j)]).collect());
        let r = tri
            .iter()
            .map(|u| (j + 1..n).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        residuals.push(r);
    }
    JointSpectrum {
        points,
        residuals,
        triangularizer: q,
        method,
    }
}

/// Joint spectrum with multiplicity (`order` points).
pub fn joint_eigs(t: &MatrixTuple, seed: u64) -> Result<JointSpectrum> {
    let report = verify_commuting(t);
    if !report.pass {
        return Err(Error::NonCommuting {
            worst: report.worst,
            threshold: report.threshold,
        });
    }
    let mats = t.mats();
    let n = t.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=GENERIC_ATTEMPTS {
        let gamma = CMatrix::random(1, mats.len(), &mut rng);
        let mut g = CMatrix::zeros(n, n);
        for (i, m) in mats.iter().enumerate() {
            g = &g + &m.scale(gamma[(0, i)]);
        }
        let q = match schur(&g, 0.0) {
            Ok(r) => r.unitary,
            Err(_) => continue,
        };
        let (tri, ok, _) = triangular_check(mats, &q);
        if ok {
            return Ok(assemble(
                &tri,
                q,
                Triangularization::GenericCombination { attempts: attempt },
            ));
        }
    }
    joint_eigs_staircase(t)
}

/// Staircase recursion: joint eigenvector by eigenspace intersection, deflate, repeat.
pub fn joint_eigs_staircase(t: &MatrixTuple) -> Result<JointSpectrum> {
    let q = staircase(t.mats())?;
    let (tri, ok, worst) = triangular_check(t.mats(), &q);
    if !ok {
        return Err(Error::JointSpectrum {
            worst_residual: worst,
        });
    }
    Ok(assemble(&tri, q, Triangularization::Staircase))
}

fn staircase(mats: &[CMatrix]) -> Result<CMatrix> {
    let n = mats[0].rows();
    if n <= 1 {
        return Ok(CMatrix::identity(n));
    }
    let mut v = joint_eigenvector(mats)?;
    let vn = crate::numerics::norm2(&v);
    for x in &mut v {
        *x /= vn;
    }
    // Complete v to a unitary [v | W].
    let mut cand = CMatrix::zeros(n, n + 1);
    cand.set_column(0, &v);
    for e in 0..n {
        cand[(e, e + 1)] = ONE;
    }
    let full = cand.orthonormalize_columns_full(n);
    let fa = full.adjoint();
    let reduced: Vec<CMatrix> = mats
        .iter()
        .map(|m| (&(&fa * m) * &full).submatrix(1, n, 1, n))
        .collect();
    let sub = staircase(&reduced)?;
    let mut lift = CMatrix::identity(n);
    lift.set_block(1, 1, &sub);
    Ok(&full * &lift)
}

fn joint_eigenvector(mats: &[CMatrix]) -> Result<Vec<C64>> {
    let n = mats[0].rows();
    let mut basis = CMatrix::identity(n);
    for m in mats {
        let restricted = &(&basis.adjoint() * m) * &basis;
        let r = restricted.rows();
        let lambda = eigenvalues(&restricted)?[0];
        let shifted = &restricted - &CMatrix::identity(r).scale(lambda);
        let gram = &shifted.adjoint() * &shifted;
        let eig = hermitian_eigen(&gram)?;
        let scale = 1.0 + operator_norm(&restricted);
        let thresh = (1e-7 * scale).powi(2);
        let mut keep: Vec<usize> = (0..r).filter(|&j| eig.values[j] <= thresh).collect();
        if keep.is_empty() {
            keep.push(0);
        }
        basis = &basis * &eig.vectors.select_columns(&keep);
    }
    Ok(basis.column(0))
}

impl CMatrix {
    /// First `k` orthonormal columns spanned by the columns of `self`.
    pub(crate) fn orthonormalize_columns_full(&self, k: usize) -> CMatrix {
        let mut q = CMatrix::zeros(self.rows(), k);
        let mut filled = 0;
        for j in 0..self.cols() {
            if filled == k {
                break;
            }
            let mut v = self.column(j);
            for _ in 0..2 {
                for jj in 0..filled {
                    let qj = q.column(jj);
                    let h = crate::numerics::inner(&qj, &v);
                    for (x, y) in v.iter_mut().zip(&qj) {
                        *x -= h * y;
                    }
                }
            }
            let nv = crate::numerics::norm2(&v);
            if nv > 1e-8 {
                for x in &mut v {
                    *x /= nv;
                }
                q.set_column(filled, &v);
                filled += 1;
            }
        }
        q
    }
}

/// Joint eigenvalues by brute-force eigenspace intersection, without
/// multiplicity. Independent of [`joint_eigs`]; meant for cross-checking.
pub fn joint_eigs_oracle(t: &MatrixTuple) -> Result<Vec<Vec<C64>>> {
    if t.order() > ORACLE_MAX_ORDER {
        return Err(Error::OrderGuard {
            order: t.order(),
            limit: ORACLE_MAX_ORDER,
        });
    }
    let report = verify_commuting(t);
    if !report.pass {
        return Err(Error::NonCommuting {
            worst: report.worst,
            threshold: report.threshold,
        });
    }
    let mats = t.mats();
    let n = t.order();
    let max_norm = mats.iter().map(operator_norm).fold(0.0, f64::max);
    let cluster_tol = 1e-6 * (1.0 + max_norm);
    let per_matrix: Vec<Vec<C64>> = mats
        .iter()
        .map(|m| Ok(cluster(&eigenvalues(m)?, cluster_tol)))
        .collect::<Result<_>>()?;

    let sizes: Vec<usize> = per_matrix.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    let kernel_tol = 1e-6 * (1.0 + max_norm);
    let found: Vec<Option<Vec<C64>>> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            // lexicographic decoding, last matrix fastest
            let mut combo = vec![ZERO; sizes.len()];
            for slot in (0..sizes.len()).rev() {
                combo[slot] = per_matrix[slot][idx % sizes[slot]];
                idx /= sizes[slot];
            }
            let mut gram = CMatrix::zeros(n, n);
            for (m, &lam) in mats.iter().zip(&combo) {
                let d = m - &CMatrix::identity(n).scale(lam);
                gram = &gram + &(&d.adjoint() * &d);
            }
            let smallest = hermitian_eigen(&gram).ok()?.values[0].max(0.0).sqrt();
            (smallest <= kernel_tol).then_some(combo)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

fn cluster(values: &[C64], tol: f64) -> Vec<C64> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for &v in values {
        match groups
            .iter_mut()
            .find(|g| (g.iter().sum::<C64>() / g.len() as f64 - v).norm() <= tol)
        {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    groups
        .into_iter()
        .map(|g| g.iter().sum::<C64>() / g.len() as f64)
        .collect()
}

// {"order": N, "matrices": [matrix, ...]}

#[derive(Serialize, Deserialize)]
pub struct MatrixTupleWire {
    pub order: usize,
    pub matrices: Vec<WireMatrix>,
}

impl MatrixTupleWire {
    pub fn from_mats(order: usize, mats: &[CMatrix]) -> Self {
        MatrixTupleWire {
            order,
            matrices: mats.iter().map(mat_to_wire).collect(),
        }
    }

    pub fn to_mats(&self) -> Result<Vec<CMatrix>> {
        let mats: Vec<CMatrix> = self
            .matrices
            .iter()
            .map(mat_from_wire)
            .collect::<Result<_>>()?;
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != self.order || m.cols() != self.order {
                return Err(Error::Dimension(format!(
                    "field \"matrices\"[{i}] is {}x{}, \"order\" says {}",
                    m.rows(),
                    m.cols(),
                    self.order
                )));
            }
        }
        Ok(mats)
    }
}

impl Serialize for MatrixTuple {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixTupleWire::from_mats(self.order, &self.mats).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MatrixTuple {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = MatrixTupleWire::deserialize(de)?;
        MatrixTuple::new(w.to_mats().map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}
