use rayon::prelude::*;
use serde::Serialize;

use super::OperatorTuple;
use crate::error::{Error, Result};
use crate::io::mat_to_wire;
use crate::numerics::{operator_norm, CMatrix, ONE};
use crate::variety::PencilFamily;
use crate::vn_check::multi_indices;

/// Finite section of the Toeplitz tuple with symbols `F_i^* + F_{n-i} z`
/// and of the shift, on `K` blocks of size `d` (block lower triangular).
#[derive(Clone, Debug)]
pub struct ToeplitzModel {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub t: Vec<CMatrix>,
    pub v: CMatrix,
    pub pencil: PencilFamily,
    /// Largest commutator among `(T_1, ..., T_{n-1}, V)`.
    pub commutation_residual: f64,
}

fn block_toeplitz(diag: &CMatrix, sub: &CMatrix, k: usize) -> CMatrix {
    let d = diag.rows();
    let mut out = CMatrix::zeros(k * d, k * d);
    for j in 0..k {
        out.set_block(j * d, j * d, diag);
        if j + 1 < k {
            out.set_block((j + 1) * d, j * d, sub);
        }
    }
    out
}

pub fn build_model(pf: &PencilFamily, k: usize) -> Result<ToeplitzModel> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "truncation degree K = {k} must be >= 2"
        )));
    }
    let (n, d) = (pf.n(), pf.d());
    let t: Vec<CMatrix> = (1..n)
        .map(|i| block_toeplitz(&pf.f(i).adjoint(), pf.f(n - i), k))
        .collect();
    let v = block_toeplitz(&CMatrix::zeros(d, d), &CMatrix::identity(d), k);
    let mut all = t.clone();
    all.push(v.clone());
    let mut worst: f64 = 0.0;
    for a in 0..all.len() {
        for b in a + 1..all.len() {
            worst = worst.max(operator_norm(&all[a].commutator(&all[b])?));
        }
    }
    Ok(ToeplitzModel {
        n,
        d,
        k,
        t,
        v,
        pencil: pf.clone(),
        commutation_residual: worst,
    })
}

impl ToeplitzModel {
    pub fn dim(&self) -> usize {
        self.k * self.d
    }

    /// `T_i`, 1-based.
    pub fn t_i(&self, i: usize) -> &CMatrix {
        &self.t[i - 1]
    }

    pub fn components(&self) -> Vec<CMatrix> {
        let mut v = self.t.clone();
        v.push(self.v.clone());
        v
    }
}

#[derive(Serialize)]
struct ModelWire<'a> {
    n: usize,
    d: usize,
    #[serde(rename = "K")]
    k: usize,
    pencil: &'a PencilFamily,
    #[serde(rename = "T")]
    t: Vec<crate::io::WireMatrix>,
    #[serde(rename = "V")]
    v: crate::io::WireMatrix,
    commutation_residual: f64,
}

impl Serialize for ToeplitzModel {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ModelWire {
            n: self.n,
            d: self.d,
            k: self.k,
            pencil: &self.pencil,
            t: self.t.iter().map(mat_to_wire).collect(),
            v: mat_to_wire(&self.v),
            commutation_residual: self.commutation_residual,
        }
        .serialize(ser)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryDefects {
    /// `‖T_i - T_{n-i}^* V‖` on the first `K - 1` blocks.
    pub restricted: Vec<f64>,
    /// The same on the whole truncated space; nonzero only through the last block.
    pub full: Vec<f64>,
}

pub fn isometry_relations_check(m: &ToeplitzModel) -> IsometryDefects {
    let inner = (m.k - 1) * m.d;
    let mut restricted = Vec::new();
    let mut full = Vec::new();
    for i in 1..m.n {
        let defect = m.t_i(i) - &(&m.t_i(m.n - i).adjoint() * &m.v);
        full.push(operator_norm(&defect));
        restricted.push(operator_norm(&defect.submatrix(0, inner, 0, inner)));
    }
    IsometryDefects { restricted, full }
}

/// Compression to the first `k_prime` blocks, a co-invariant subspace.
pub fn compress_model(m: &ToeplitzModel, k_prime: usize) -> Result<OperatorTuple> {
    if k_prime < 2 || k_prime >= m.k {
        return Err(Error::InvalidArgument(format!(
            "compression degree K' = {k_prime} must satisfy 2 <= K' <= K - 1 = {}",
            m.k - 1
        )));
    }
    let dim = k_prime * m.d;
    let cut = |x: &CMatrix| x.submatrix(0, dim, 0, dim);
    OperatorTuple::new(m.t.iter().map(cut).collect(), cut(&m.v))
}

/// The `big x small` matrix including the first `small` coordinates.
pub fn coordinate_inclusion(big: usize, small: usize) -> CMatrix {
    let mut e = CMatrix::zeros(big, small);
    for j in 0..small.min(big) {
        e[(j, j)] = ONE;
    }
    e
}

#[derive(Clone, Debug, Serialize)]
pub struct DilationReport {
    pub max_degree: usize,
    pub monomials: usize,
    pub max_residual: f64,
    pub worst_alpha: Vec<u32>,
}

/// `max ‖E^* T^α E - S^α‖` over multi-indices of total degree `<= max_degree`.
pub fn dilation_check(
    t: &OperatorTuple,
    m: &ToeplitzModel,
    embed: &CMatrix,
    max_degree: usize,
) -> Result<DilationReport> {
    if t.n() != m.n {
        return Err(Error::Dimension(format!(
            "tuple has n = {}, model n = {}",
            t.n(),
            m.n
        )));
    }
    if embed.rows() != m.dim() || embed.cols() != t.dim() {
        return Err(Error::Dimension(format!(
            "embedding is {}x{}, expected {}x{}",
            embed.rows(),
            embed.cols(),
            m.dim(),
            t.dim()
        )));
    }
    let gram = &embed.adjoint() * embed;
    if (&gram - &CMatrix::identity(t.dim())).max_abs() > 1e-10 {
        return Err(Error::InvalidArgument(
            "embedding is not an isometry".into(),
        ));
    }
    let big = m.components();
    let small = t.components();
    let powers = |mats: &[CMatrix]| -> Result<Vec<Vec<CMatrix>>> {
        mats.iter()
            .map(|x| {
                let mut v = vec![CMatrix::identity(x.rows())];
                for j in 1..=max_degree {
                    let next = v[j - 1].matmul(x)?;
                    v.push(next);
                }
                Ok(v)
            })
            .collect()
    };
    let pb = powers(&big)?;
    let ps = powers(&small)?;
    let et = embed.adjoint();
    let alphas = multi_indices(m.n, max_degree);
    let residuals: Vec<f64> = alphas
        .par_iter()
        .map(|alpha| {
            let mono = |p: &[Vec<CMatrix>], dim: usize| {
                alpha
                    .iter()
                    .enumerate()
                    .fold(CMatrix::identity(dim), |acc, (v, &a)| {
                        &acc * &p[v][a as usize]
                    })
            };
            let lhs = &(&et * &mono(&pb, m.dim())) * embed;
            operator_norm(&(&lhs - &mono(&ps, t.dim())))
        })
        .collect();
    let (idx, worst) =
        residuals.iter().enumerate().fold(
            (0, 0.0),
            |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc },
        );
    Ok(DilationReport {
        max_degree,
        monomials: alphas.len(),
        max_residual: worst,
        worst_alpha: alphas[idx].clone(),
    })
}
