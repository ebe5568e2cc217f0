use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{mat_from_wire, mat_to_wire, WireMatrix};
use crate::numerics::{operator_norm, CMatrix, C64, ONE};

/// Polynomial in `n` commuting variables `(s_1, ..., s_{n-1}, p)` with
/// `r x r` matrix coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly {
    n: usize,
    order: usize,
    terms: Vec<(Vec<u32>, CMatrix)>,
    seed: Option<u64>,
}

/// All multi-indices in `n` variables of total degree `<= d`, graded then
/// lexicographic.
pub fn multi_indices(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=d {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, total as u32);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, k: usize, left: u32) {
    if k + 1 == cur.len() {
        cur[k] = left;
        out.push(cur.clone());
        return;
    }
    for a in (0..=left).rev() {
        cur[k] = a;
        fill(out, cur, k + 1, left - a);
    }
}

impl MPoly {
    pub fn new(n: usize, order: usize, terms: Vec<(Vec<u32>, CMatrix)>) -> Result<Self> {
        if n == 0 || order == 0 {
            return Err(Error::InvalidArgument(
                "polynomial needs n >= 1 and order >= 1".into(),
            ));
        }
        for (alpha, c) in &terms {
            if alpha.len() != n {
                return Err(Error::Dimension(format!(
                    "multi-index of length {} in {n} variables",
                    alpha.len()
                )));
            }
            if c.rows() != order || c.cols() != order {
                return Err(Error::Dimension(format!(
                    "coefficient is {}x{}, expected {order}x{order}",
                    c.rows(),
                    c.cols()
                )));
            }
        }
        Ok(MPoly {
            n,
            order,
            terms,
            seed: None,
        })
    }

    pub fn constant(n: usize, c: CMatrix) -> Result<Self> {
        let r = c.require_square()?;
        MPoly::new(n, r, vec![(vec![0; n], c)])
    }

    /// Scalar monomial `z^alpha`.
    pub fn monomial(alpha: Vec<u32>) -> Self {
        MPoly {
            n: alpha.len(),
            order: 1,
            terms: vec![(alpha, CMatrix::scalar(ONE))],
            seed: None,
        }
    }

    /// Scalar polynomial in one coordinate: `z_var` (0-based).
    pub fn coordinate(n: usize, var: usize) -> Self {
        let mut alpha = vec![0; n];
        alpha[var] = 1;
        MPoly::monomial(alpha)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn terms(&self) -> &[(Vec<u32>, CMatrix)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(a, _)| a.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_partial_degree(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|(a, _)| a.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, lambda: C64) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.scale(lambda)))
                .collect(),
            ..self.clone()
        }
    }

    /// Entrywise conjugated coefficients: `f̄(z) = conj(f(conj z))` entrywise.
    pub fn conj_coefficients(&self) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.conj()))
                .collect(),
            ..self.clone()
        }
    }

    /// Value at a scalar point, an `r x r` matrix.
    pub fn eval_point(&self, z: &[C64]) -> Result<CMatrix> {
        self.check_arity(z.len())?;
        let pows = scalar_powers(z, self.max_partial_degree());
        let mut acc = CMatrix::zeros(self.order, self.order);
        for (alpha, c) in &self.terms {
            let w = monomial_value(&pows, alpha);
            acc = &acc + &c.scale(w);
        }
        Ok(acc)
    }

    /// Scalar fast path; `None` for matrix-valued polynomials.
    pub fn eval_scalar(&self, z: &[C64]) -> Option<C64> {
        if self.order != 1 || z.len() != self.n {
            return None;
        }
        let pows = scalar_powers(z, self.max_partial_degree());
        Some(
            self.terms
                .iter()
                .map(|(alpha, c)| c[(0, 0)] * monomial_value(&pows, alpha))
                .sum(),
        )
    }

    /// `‖f(z)‖` at a scalar point.
    pub fn norm_at(&self, z: &[C64]) -> f64 {
        match self.eval_scalar(z) {
            Some(v) => v.norm(),
            None => self
                .eval_point(z)
                .map(|m| operator_norm(&m))
                .unwrap_or(f64::NAN),
        }
    }

    /// `Σ coeff(α) ⊗ T^α` for a commuting tuple of `m x m` matrices; order `r m`.
    pub fn eval_tuple(&self, mats: &[CMatrix]) -> Result<CMatrix> {
        self.check_arity(mats.len())?;
        let m = mats[0].require_square()?;
        if mats.iter().any(|t| t.rows() != m || t.cols() != m) {
            return Err(Error::Dimension(
                "tuple matrices must share one order".into(),
            ));
        }
        let dmax = self.max_partial_degree() as usize;
        let mut pows: Vec<Vec<CMatrix>> = Vec::with_capacity(mats.len());
        for t in mats {
            let mut v = vec![CMatrix::identity(m)];
            for k in 1..=dmax {
                let next = v[k - 1].matmul(t)?;
                v.push(next);
            }
            pows.push(v);
        }
        let mut acc = CMatrix::zeros(self.order * m, self.order * m);
        for (alpha, c) in &self.terms {
            let mut mono = CMatrix::identity(m);
            for (v, &a) in alpha.iter().enumerate() {
                if a > 0 {
                    mono = mono.matmul(&pows[v][a as usize])?;
                }
            }
            acc = &acc + &c.kron(&mono);
        }
        Ok(acc)
    }

    fn check_arity(&self, k: usize) -> Result<()> {
        if k != self.n {
            return Err(Error::Dimension(format!(
                "polynomial has {} variables, argument has {k}",
                self.n
            )));
        }
        Ok(())
    }
}

fn scalar_powers(z: &[C64], d: u32) -> Vec<Vec<C64>> {
    z.iter()
        .map(|&x| {
            let mut v = Vec::with_capacity(d as usize + 1);
            let mut acc = ONE;
            for _ in 0..=d {
                v.push(acc);
                acc *= x;
            }
            v
        })
        .collect()
}

fn monomial_value(pows: &[Vec<C64>], alpha: &[u32]) -> C64 {
    alpha.iter().zip(pows).fold(
        ONE,
        |acc, (&a, p)| if a == 0 { acc } else { acc * p[a as usize] },
    )
}

/// Polynomial with every multi-index of total degree `<= max_degree` and
/// independent complex-Gaussian coefficient blocks, scaled so that the
/// largest coefficient has operator norm one.
pub fn random_poly(n: usize, max_degree: usize, block_order: usize, seed: u64) -> Result<MPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(Vec<u32>, CMatrix)> = multi_indices(n, max_degree)
        .into_iter()
        .map(|a| (a, CMatrix::random(block_order, block_order, &mut rng)))
        .collect();
    let big = terms
        .iter()
        .map(|(_, c)| operator_norm(c))
        .fold(0.0, f64::max);
    let mut f = MPoly::new(n, block_order, terms)?;
    if big > 0.0 {
        f = f.scale(C64::new(1.0 / big, 0.0));
    }
    f.seed = Some(seed);
    Ok(f)
}

// {"n": 2, "order": 1, "terms": [{"alpha": [1, 0], "coeff": [[[1, 0]]]}], "seed": 7}

#[derive(Serialize, Deserialize)]
struct TermWire {
    alpha: Vec<u32>,
    coeff: WireMatrix,
}

#[derive(Serialize, Deserialize)]
struct MPolyWire {
    n: usize,
    order: usize,
    terms: Vec<TermWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        MPolyWire {
            n: self.n,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermWire {
                    alpha: a.clone(),
                    coeff: mat_to_wire(c),
                })
                .collect(),
            seed: self.seed,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = MPolyWire::deserialize(de)?;
        let terms = w
            .terms
            .iter()
            .map(|t| Ok((t.alpha.clone(), mat_from_wire(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let mut f = MPoly::new(w.n, w.order, terms).map_err(D::Error::custom)?;
        f.seed = w.seed;
        Ok(f)
    }
}
