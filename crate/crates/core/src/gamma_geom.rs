//! Points of the symmetrized polydisc: symmetrization, fiber inversion and
//! membership classification.
//!
//! For `|p| < 1` the system `s_i = c_i + conj(c_{n-i}) p` has exactly one
//! solution. Pairing equation `i` with the conjugate of equation `n-i` gives
//! `c_i = (s_i - p conj(s_{n-i})) / (1 - |p|^2)`; for the middle index of even
//! `n` a homogeneous solution would need `t = -conj(t) p`, which forces `t = 0`
//! when `|p| < 1`. So the existential witness of the closure characterization
//! is unique and membership reduces to a deterministic recursion on it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{poly_roots, C64, ONE, ZERO};

pub const DEFAULT_TOL: f64 = 1e-9;

/// `(s_1, ..., s_{n-1}, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaPoint {
    s: Vec<C64>,
    p: C64,
}

impl GammaPoint {
    pub fn new(s: Vec<C64>, p: C64) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("GammaPoint needs n >= 2".into()));
        }
        Self::new_any(s, p)
    }

    /// Also admits `n = 1` (no `s` coordinates); used by the recursion.
    fn new_any(s: Vec<C64>, p: C64) -> Result<Self> {
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !s.iter().all(finite) || !finite(&p) {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        Ok(GammaPoint { s, p })
    }

    /// Splits a coordinate vector `(x_1, ..., x_n)` as `s = x_1..x_{n-1}`, `p = x_n`.
    pub fn from_coords(coords: &[C64]) -> Result<Self> {
        match coords.split_last() {
            Some((&p, s)) => Self::new(s.to_vec(), p),
            None => Err(Error::InvalidArgument("empty coordinate list".into())),
        }
    }

    pub fn n(&self) -> usize {
        self.s.len() + 1
    }

    pub fn s(&self) -> &[C64] {
        &self.s
    }

    pub fn p(&self) -> C64 {
        self.p
    }

    pub fn coords(&self) -> Vec<C64> {
        let mut v = self.s.clone();
        v.push(self.p);
        v
    }

    /// `(conj(s_{n-1}) p, ..., conj(s_1) p, p)`.
    pub fn boundary_reflection(&self) -> GammaPoint {
        let s = self.s.iter().rev().map(|z| z.conj() * self.p).collect();
        GammaPoint { s, p: self.p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PointLabel {
    Interior,
    TopBoundary,
    Distinguished,
    Exterior,
}

impl PointLabel {
    pub fn in_closure(self) -> bool {
        self != PointLabel::Exterior
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PointLabel::Interior => "INTERIOR",
            PointLabel::TopBoundary => "TOP_BOUNDARY",
            PointLabel::Distinguished => "DISTINGUISHED",
            PointLabel::Exterior => "EXTERIOR",
        }
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointClass {
    pub label: PointLabel,
    /// Smallest slack of the binding inequality over the recursion; negative
    /// exactly for `EXTERIOR`.
    pub margin: f64,
    /// Largest `1 / (1 - |p|^2)` met; infinite once the boundary band was entered.
    pub conditioning: f64,
}

/// Elementary symmetric polynomials `e_1..e_n` of `z`.
pub fn elementary_symmetric(z: &[C64]) -> Vec<C64> {
    let n = z.len();
    let mut e = vec![ZERO; n + 1];
    e[0] = ONE;
    for (k, &x) in z.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let prev = e[j - 1];
            e[j] += prev * x;
        }
    }
    e.remove(0);
    e
}

pub fn symmetrize(z: &[C64]) -> Result<GammaPoint> {
    if z.len() < 2 {
        return Err(Error::InvalidArgument("symmetrize needs n >= 2".into()));
    }
    GammaPoint::from_coords(&elementary_symmetric(z))
}

/// A fiber of the symmetrization map: the roots of
/// `t^n - s_1 t^{n-1} + s_2 t^{n-2} - ... + (-1)^n p`.
pub fn desymmetrize(x: &GammaPoint) -> Result<Vec<C64>> {
    let coeffs: Vec<C64> = x
        .coords()
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { -c } else { c })
        .collect();
    poly_roots(&coeffs, true)
}

/// Canonical witness `c` with `s_i = c_i + conj(c_{n-i}) p`, plus its residual.
pub fn canonical_c_with_residual(x: &GammaPoint, tol: f64) -> Result<(Vec<C64>, f64)> {
    let p = x.p;
    let modulus = p.norm();
    if modulus >= 1.0 - tol {
        return Err(Error::BoundaryRegime { modulus });
    }
    let s = &x.s;
    let m = s.len();
    let denom = 1.0 - p.norm_sqr();
    let c: Vec<C64> = (0..m)
        .map(|i| (s[i] - p * s[m - 1 - i].conj()) / denom)
        .collect();
    let residual = (0..m)
        .map(|i| (s[i] - c[i] - c[m - 1 - i].conj() * p).norm())
        .fold(0.0, f64::max);
    Ok((c, residual))
}

pub fn canonical_c(x: &GammaPoint, tol: f64) -> Result<Vec<C64>> {
    Ok(canonical_c_with_residual(x, tol)?.0)
}

/// Recursive membership test for `Γ_n` with boundary classification.
pub fn classify_point(x: &GammaPoint, tol: f64) -> PointClass {
    classify_coords(&x.s, x.p, tol)
}

fn finish(label: PointLabel, margin: f64, conditioning: f64) -> PointClass {
    let margin = if label == PointLabel::Exterior {
        margin.min(-f64::MIN_POSITIVE)
    } else {
        margin.max(0.0)
    };
    PointClass {
        label,
        margin,
        conditioning,
    }
}

fn classify_coords(s: &[C64], p: C64, tol: f64) -> PointClass {
    let modulus = p.norm();
    if s.is_empty() {
        // Γ_1 is the closed disc and its distinguished boundary the circle.
        let label = if modulus > 1.0 + tol {
            PointLabel::Exterior
        } else if modulus >= 1.0 - tol {
            PointLabel::Distinguished
        } else {
            PointLabel::Interior
        };
        // a plain disc test: nothing is amplified at this level
        return finish(label, 1.0 - modulus, 1.0);
    }

    let n = s.len() + 1;
    let scale = 1.0 + s.iter().map(|z| z.norm()).sum::<f64>();
    let level_tol = tol * scale;

    if modulus > 1.0 + tol {
        return finish(PointLabel::Exterior, 1.0 - modulus, f64::INFINITY);
    }

    if modulus >= 1.0 - tol {
        let m = s.len();
        let relation = (0..m)
            .map(|i| (s[i] - s[m - 1 - i].conj() * p).norm())
            .fold(0.0, f64::max);
        let mut margin = level_tol - relation;
        if relation > level_tol {
            return finish(PointLabel::Exterior, margin, f64::INFINITY);
        }
        let scaled: Vec<C64> = s
            .iter()
            .enumerate()
            .map(|(i, z)| z * ((n - 1 - i) as f64 / n as f64))
            .collect();
        let (last, rest) = scaled.split_last().expect("n >= 2");
        let inner = classify_coords(rest, *last, tol);
        margin = margin.min(inner.margin);
        let label = if inner.label.in_closure() {
            PointLabel::Distinguished
        } else {
            PointLabel::Exterior
        };
        return finish(label, margin, f64::INFINITY);
    }

    let here = GammaPoint { s: s.to_vec(), p };
    let (c, _) = canonical_c_with_residual(&here, tol).expect("|p| < 1 - tol");
    let cond = 1.0 / (1.0 - p.norm_sqr());
    let (last, rest) = c.split_last().expect("n >= 2");
    let inner = classify_coords(rest, *last, tol);
    let label = match inner.label {
        PointLabel::Interior => PointLabel::Interior,
        PointLabel::Exterior => PointLabel::Exterior,
        _ => PointLabel::TopBoundary,
    };
    finish(
        label,
        (1.0 - modulus).min(inner.margin),
        cond.max(inner.conditioning),
    )
}

/// Closed-membership test for `Γ_2`: `|s| <= 2` and `|s - conj(s) p| <= 1 - |p|^2`.
pub fn ay_criterion(s: C64, p: C64) -> (bool, f64) {
    let gap_s = 2.0 - s.norm();
    let gap_p = 1.0 - p.norm_sqr() - (s - s.conj() * p).norm();
    let slack = gap_s.min(gap_p);
    (slack >= 0.0, slack)
}

// JSON wire format: {"n": int, "s": [[re, im], ...], "p": [re, im]}

#[derive(Serialize, Deserialize)]
struct GammaPointWire {
    n: usize,
    s: Vec<[f64; 2]>,
    p: [f64; 2],
}

impl Serialize for GammaPoint {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        GammaPointWire {
            n: self.n(),
            s: self.s.iter().map(|z| [z.re, z.im]).collect(),
            p: [self.p.re, self.p.im],
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GammaPoint {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = GammaPointWire::deserialize(de)?;
        if w.s.len() + 1 != w.n {
            return Err(D::Error::custom(format!(
                "field \"s\" must have n-1 = {} entries, found {}",
                w.n.saturating_sub(1),
                w.s.len()
            )));
        }
        GammaPoint::new(
            w.s.iter().map(|a| C64::new(a[0], a[1])).collect(),
            C64::new(w.p[0], w.p[1]),
        )
        .map_err(D::Error::custom)
    }
}
