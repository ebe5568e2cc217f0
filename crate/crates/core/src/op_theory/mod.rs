//! Γₙ-contractions at finite dimension: defect operators, the fundamental
//! operator tuple, truncated Toeplitz models and their compressions.

mod classify;
mod model;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_geom::GammaPoint;
use crate::io::{c_to_wire, mat_from_wire, mat_to_wire, WireMatrix};
use crate::joint_spectrum::{commutator_report, DEFAULT_COMM_TOL};
use crate::numerics::{hermitian_sqrt_and_pinv, numerical_radius, operator_norm, CMatrix, C64};
use crate::variety::PencilFamily;

pub use classify::{classify_tuple, Evidence, TupleClass, TupleLabel, Witness};
pub use model::{
    build_model, compress_model, coordinate_inclusion, dilation_check, isometry_relations_check,
    DilationReport, IsometryDefects, ToeplitzModel,
};

/// Default relative cut-off for the range of `D_P`: eigenvalues of
/// `I - P^*P` below `1e-10 ‖I - P^*P‖` are discarded.
pub const FO_RANK_TOL: f64 = 1e-10;
/// Reconstruction residual below which the solve counts as successful.
pub const FO_RESIDUAL_TOL: f64 = 1e-8;
pub const OMEGA_GRID: usize = 256;

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// A commuting tuple `(S_1, ..., S_{n-1}, P)` of `m x m` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple {
    n: usize,
    m: usize,
    s: Vec<CMatrix>,
    p: CMatrix,
}

impl OperatorTuple {
    pub fn new(s: Vec<CMatrix>, p: CMatrix) -> Result<Self> {
        Self::with_tol(s, p, DEFAULT_COMM_TOL)
    }

    /// Checks shapes and pairwise commutation; contractivity is left to
    /// [`classify_tuple`].
    pub fn with_tol(s: Vec<CMatrix>, p: CMatrix, comm_tol: f64) -> Result<Self> {
        let m = p.require_square()?;
        if s.is_empty() {
            return Err(Error::InvalidArgument("tuple needs n >= 2".into()));
        }
        for (i, x) in s.iter().enumerate() {
            if x.rows() != m || x.cols() != m {
                return Err(Error::Dimension(format!(
                    "S_{} is {}x{}, P is {m}x{m}",
                    i + 1,
                    x.rows(),
                    x.cols()
                )));
            }
        }
        let mut all = s.clone();
        all.push(p.clone());
        let rep = commutator_report(&all, comm_tol);
        if !rep.pass {
            return Err(Error::NonCommuting {
                worst: rep.worst,
                threshold: rep.threshold,
            });
        }
        Ok(OperatorTuple {
            n: s.len() + 1,
            m,
            s,
            p,
        })
    }

    /// The `1 x 1` tuple of a point.
    pub fn scalar(x: &GammaPoint) -> Self {
        OperatorTuple {
            n: x.n(),
            m: 1,
            s: x.s().iter().map(|&z| CMatrix::scalar(z)).collect(),
            p: CMatrix::scalar(x.p()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> &[CMatrix] {
        &self.s
    }

    /// `S_i`, 1-based.
    pub fn s_i(&self, i: usize) -> &CMatrix {
        &self.s[i - 1]
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    /// `(S_1, ..., S_{n-1}, P)`.
    pub fn components(&self) -> Vec<CMatrix> {
        let mut v = self.s.clone();
        v.push(self.p.clone());
        v
    }

    pub fn adjoint(&self) -> Self {
        OperatorTuple {
            n: self.n,
            m: self.m,
            s: self.s.iter().map(CMatrix::adjoint).collect(),
            p: self.p.adjoint(),
        }
    }

    /// `I - P^* P`.
    pub fn defect_square(&self) -> CMatrix {
        &CMatrix::identity(self.m) - &(&self.p.adjoint() * &self.p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaEntry {
    pub i: usize,
    /// Grid maximum of `ω(A_i + A_{n-i} z)` over the unit circle.
    pub max_omega: f64,
    pub at_z: [f64; 2],
    /// `C(n, i)`.
    pub bound: f64,
    pub within: bool,
}

/// The tuple `A_i` with `S_i - S_{n-i}^* P = D_P A_i D_P`, expressed in an
/// orthonormal basis of the range of `D_P`.
#[derive(Clone, Debug, Serialize)]
pub struct FOTuple {
    pub n: usize,
    pub rank: usize,
    #[serde(serialize_with = "ser_mats")]
    pub a: Vec<CMatrix>,
    /// `m x rank` isometry onto the range of `D_P`.
    #[serde(serialize_with = "ser_mat")]
    pub range_basis: CMatrix,
    pub residuals: Vec<f64>,
    pub solved: bool,
    pub omega_report: Vec<OmegaEntry>,
}

fn ser_mats<S: serde::Serializer>(v: &[CMatrix], ser: S) -> std::result::Result<S::Ok, S::Error> {
    let w: Vec<WireMatrix> = v.iter().map(mat_to_wire).collect();
    w.serialize(ser)
}

fn ser_mat<S: serde::Serializer>(m: &CMatrix, ser: S) -> std::result::Result<S::Ok, S::Error> {
    mat_to_wire(m).serialize(ser)
}

impl FOTuple {
    /// `A_i` (1-based) acting on the whole space, zero off the range of `D_P`.
    pub fn lifted(&self, i: usize) -> CMatrix {
        let r = &self.range_basis;
        &(r * &self.a[i - 1]) * &r.adjoint()
    }

    /// The pencil family whose variety carries the joint spectrum of the
    /// tuple: `F_i = A_i^*`, so that `Φ_i(p) = A_i + p A_{n-i}^*`.
    pub fn reference_pencil(&self) -> Result<PencilFamily> {
        if self.rank == 0 {
            return Err(Error::InvalidArgument(
                "P is an isometry; the defect space is trivial".into(),
            ));
        }
        PencilFamily::new(self.a.iter().map(CMatrix::adjoint).collect())
    }

    /// The pencil family with `F_i = A_i`.
    pub fn literal_pencil(&self) -> Result<PencilFamily> {
        if self.rank == 0 {
            return Err(Error::InvalidArgument(
                "P is an isometry; the defect space is trivial".into(),
            ));
        }
        PencilFamily::new(self.a.clone())
    }
}

/// Solves for the fundamental operator tuple on the range of `D_P`.
///
/// `rank_tol` is relative to `‖I - P^*P‖`.
pub fn fo_tuple(t: &OperatorTuple, rank_tol: f64) -> Result<FOTuple> {
    let n = t.n;
    let m = t.m;
    let q = t.defect_square();
    let qn = operator_norm(&q);
    let cutoff = (rank_tol * qn).max(1e-14 * (1.0 + operator_norm(&t.p).powi(2)));
    let sp = hermitian_sqrt_and_pinv(&q, cutoff)?;
    let rhs: Vec<CMatrix> = (1..n)
        .map(|i| t.s_i(i) - &(&t.s_i(n - i).adjoint() * &t.p))
        .collect();
    let scale = 1.0 + t.s.iter().map(operator_norm).fold(0.0, f64::max);

    if sp.rank == 0 {
        let worst = rhs.iter().map(operator_norm).fold(0.0, f64::max);
        if worst > FO_RESIDUAL_TOL * scale {
            return Err(Error::IsometryDefectInconsistency { rhs_norm: worst });
        }
        return Ok(FOTuple {
            n,
            rank: 0,
            a: vec![CMatrix::zeros(0, 0); n - 1],
            range_basis: CMatrix::zeros(m, 0),
            residuals: vec![worst; n - 1],
            solved: true,
            omega_report: (1..n)
                .map(|i| OmegaEntry {
                    i,
                    max_omega: 0.0,
                    at_z: [1.0, 0.0],
                    bound: binomial(n, i),
                    within: true,
                })
                .collect(),
        });
    }

    let r = &sp.range_basis;
    let rt = r.adjoint();
    let d = &sp.sqrt;
    let dp = &sp.pinv_of_sqrt;
    let mut a = Vec::with_capacity(n - 1);
    let mut residuals = Vec::with_capacity(n - 1);
    for x in &rhs {
        let full = &(dp * x) * dp;
        let ai = &(&rt * &full) * r;
        let lifted = &(r * &ai) * &rt;
        residuals.push(operator_norm(&(x - &(&(d * &lifted) * d))));
        a.push(ai);
    }
    let solved = residuals.iter().all(|&e| e <= FO_RESIDUAL_TOL * scale);
    let omega_report = (1..n)
        .map(|i| omega_entry(n, i, &a[i - 1], &a[n - i - 1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(FOTuple {
        n,
        rank: sp.rank,
        a,
        range_basis: sp.range_basis,
        residuals,
        solved,
        omega_report,
    })
}

fn omega_entry(n: usize, i: usize, ai: &CMatrix, aj: &CMatrix) -> Result<OmegaEntry> {
    let bound = binomial(n, i);
    let mut best = (f64::NEG_INFINITY, C64::new(1.0, 0.0));
    for k in 0..OMEGA_GRID {
        let z = C64::from_polar(1.0, 2.0 * PI * k as f64 / OMEGA_GRID as f64);
        let w = numerical_radius(&(ai + &aj.scale(z)), 128)?;
        if w > best.0 {
            best = (w, z);
        }
    }
    Ok(OmegaEntry {
        i,
        max_omega: best.0,
        at_z: c_to_wire(best.1),
        bound,
        within: best.0 <= bound + 1e-6,
    })
}

// {"n": 2, "order": m, "S": [matrix, ...], "P": matrix}

#[derive(Serialize, Deserialize)]
struct TupleWire {
    n: usize,
    order: usize,
    #[serde(rename = "S")]
    s: Vec<WireMatrix>,
    #[serde(rename = "P")]
    p: WireMatrix,
}

impl Serialize for OperatorTuple {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        TupleWire {
            n: self.n,
            order: self.m,
            s: self.s.iter().map(mat_to_wire).collect(),
            p: mat_to_wire(&self.p),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OperatorTuple {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = TupleWire::deserialize(de)?;
        if w.s.len() + 1 != w.n {
            return Err(D::Error::custom(format!(
                "field \"S\" must hold n-1 = {} matrices, found {}",
                w.n.saturating_sub(1),
                w.s.len()
            )));
        }
        let s =
            w.s.iter()
                .map(mat_from_wire)
                .collect::<Result<Vec<_>>>()
                .map_err(D::Error::custom)?;
        let p = mat_from_wire(&w.p).map_err(D::Error::custom)?;
        if p.rows() != w.order {
            return Err(D::Error::custom(format!(
                "field \"P\" has {} rows, \"order\" says {}",
                p.rows(),
                w.order
            )));
        }
        OperatorTuple::new(s, p).map_err(D::Error::custom)
    }
}
