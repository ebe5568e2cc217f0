//! Distinguished varieties cut out by commuting matrix pencils.
//!
//! A family `F_1, ..., F_{n-1}` of `d x d` matrices defines the set of
//! `(s_1, ..., s_{n-1}, p)` with `(s_1, ..., s_{n-1})` in the joint spectrum of
//! the pencils `Φ_i(p) = F_i^* + p F_{n-i}`. Each defining polynomial
//! `f_i = det(Φ_i(p) - s_i I)` has leading term `(-s_i)^d` in its own variable
//! `s_i`; since the variables are separated, `{f_1, ..., f_{n-1}}` is a regular
//! sequence by construction and no symbolic algebra is needed to certify it.

mod sample;
mod validate;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{mat_from_wire, mat_to_wire, WireMatrix};
use crate::joint_spectrum::{joint_eigs, MatrixTuple};
use crate::numerics::{det, operator_norm, CMatrix, C64};

pub use sample::{
    component_count, g2_variety_from_matrix, polydisc_sample, polydisc_sample_from, sample_variety,
    sample_variety_tol, separating_poly, AdjointConvention, G2Variety, PolydiscPoint, SampleRecord,
    Separation, VarietySample, DET_TOL,
};
pub(crate) use validate::classify_fiber_point;
pub use validate::{
    condition_one, validate_pencil, BoundaryAudit, CheckReport, ConditionOne, Containment,
    Monicity, Verdict, COLLISION_GAP, COLLISION_RELAX, RESOLUTION,
};

pub const DEFAULT_PENCIL_COMM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PencilFamily {
    n: usize,
    d: usize,
    f: Vec<CMatrix>,
}

impl PencilFamily {
    /// `n` is taken as `f.len() + 1`.
    pub fn new(f: Vec<CMatrix>) -> Result<Self> {
        let d = match f.first() {
            Some(m) => m.require_square()?,
            None => return Err(Error::InvalidArgument("pencil family needs n >= 2".into())),
        };
        if d == 0 {
            return Err(Error::InvalidArgument(
                "pencil matrices must be non-empty".into(),
            ));
        }
        for (i, m) in f.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::Dimension(format!(
                    "F_{} is {}x{}, expected {d}x{d}",
                    i + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_finite() {
                return Err(Error::NonFinite { row: 0, col: 0 });
            }
        }
        Ok(PencilFamily {
            n: f.len() + 1,
            d,
            f,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.f
    }

    /// `F_i`, 1-based.
    pub fn f(&self, i: usize) -> &CMatrix {
        &self.f[i - 1]
    }

    /// `Φ_i(p) = F_i^* + p F_{n-i}` for `i = 1..n-1`.
    pub fn pencils_at(&self, p: C64) -> Vec<CMatrix> {
        (1..self.n)
            .map(|i| &self.f(i).adjoint() + &self.f(self.n - i).scale(p))
            .collect()
    }

    /// The family `(F_1^*, ..., F_{n-1}^*)`.
    pub fn adjoint_family(&self) -> PencilFamily {
        PencilFamily {
            n: self.n,
            d: self.d,
            f: self.f.iter().map(CMatrix::adjoint).collect(),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.f.iter().map(operator_norm).fold(0.0, f64::max)
    }

    /// `f_i(s, p) = det(Φ_i(p) - s_i I)` for every `i`.
    pub fn defining_values(&self, s: &[C64], p: C64) -> Result<Vec<C64>> {
        if s.len() != self.n - 1 {
            return Err(Error::Dimension(format!(
                "expected {} s-coordinates, got {}",
                self.n - 1,
                s.len()
            )));
        }
        self.pencils_at(p)
            .iter()
            .zip(s)
            .map(|(phi, &si)| det(&(phi - &CMatrix::identity(self.d).scale(si))))
            .collect()
    }

    /// Tolerance scale `(1 + max ‖F_i‖)^d` for determinant residuals.
    pub fn det_scale(&self) -> f64 {
        (1.0 + self.max_norm()).powi(self.d as i32)
    }
}

/// Joint spectrum of `(Φ_1(p), ..., Φ_{n-1}(p))`: exactly `d` points with multiplicity.
pub fn fiber(pf: &PencilFamily, p: C64, seed: u64) -> Result<Vec<Vec<C64>>> {
    let t = MatrixTuple::with_tol(pf.pencils_at(p), DEFAULT_PENCIL_COMM_TOL)?;
    Ok(joint_eigs(&t, seed)?.points)
}

/// Polar grid over the closed disc: `radii` circles from 0 to `1 - epsilon`
/// with `angles` points each, plus optionally the unit circle sampled at
/// `angles * boundary_refine` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscGrid {
    pub radii: usize,
    pub angles: usize,
    pub include_boundary: bool,
    pub boundary_refine: usize,
    pub epsilon: f64,
}

impl Default for DiscGrid {
    fn default() -> Self {
        DiscGrid {
            radii: 24,
            angles: 64,
            include_boundary: true,
            boundary_refine: 1,
            epsilon: 1e-3,
        }
    }
}

impl DiscGrid {
    pub fn new(radii: usize, angles: usize) -> Self {
        DiscGrid {
            radii,
            angles,
            ..Default::default()
        }
    }

    pub fn without_boundary(mut self) -> Self {
        self.include_boundary = false;
        self
    }

    pub fn with_boundary_refine(mut self, k: usize) -> Self {
        self.boundary_refine = k.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.angles == 0 || (self.radii == 0 && !self.include_boundary) {
            return Err(Error::InvalidArgument("empty grid".into()));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::InvalidArgument(
                "grid epsilon must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn radius(&self, k: usize) -> f64 {
        if self.radii <= 1 {
            0.0
        } else {
            (1.0 - self.epsilon) * k as f64 / (self.radii - 1) as f64
        }
    }

    /// Grid nodes in order: radius-major interior nodes, then the boundary circle.
    /// Each node carries `(p, on_boundary)`.
    pub fn nodes(&self) -> Vec<(C64, bool)> {
        let mut out = Vec::new();
        for k in 0..self.radii {
            let r = self.radius(k);
            for j in 0..self.angles {
                let th = 2.0 * PI * j as f64 / self.angles as f64;
                out.push((C64::from_polar(r, th), false));
            }
        }
        if self.include_boundary {
            let m = self.angles * self.boundary_refine.max(1);
            for j in 0..m {
                let th = 2.0 * PI * j as f64 / m as f64;
                out.push((C64::from_polar(1.0, th), true));
            }
        }
        out
    }
}

// Pencil JSON: the matrix-tuple layout plus "n".

#[derive(Serialize, Deserialize)]
struct PencilWire {
    n: usize,
    order: usize,
    matrices: Vec<WireMatrix>,
}

impl Serialize for PencilFamily {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        PencilWire {
            n: self.n,
            order: self.d,
            matrices: self.f.iter().map(mat_to_wire).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PencilFamily {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = PencilWire::deserialize(de)?;
        if w.matrices.len() + 1 != w.n {
            return Err(D::Error::custom(format!(
                "field \"matrices\" must hold n-1 = {} matrices, found {}",
                w.n.saturating_sub(1),
                w.matrices.len()
            )));
        }
        let mats: Vec<CMatrix> = w
            .matrices
            .iter()
            .map(mat_from_wire)
            .collect::<Result<_>>()
            .map_err(D::Error::custom)?;
        if let Some((i, m)) = mats.iter().enumerate().find(|(_, m)| m.rows() != w.order) {
            return Err(D::Error::custom(format!(
                "field \"matrices\"[{i}] has {} rows, \"order\" says {}",
                m.rows(),
                w.order
            )));
        }
        PencilFamily::new(mats).map_err(D::Error::custom)
    }
}
