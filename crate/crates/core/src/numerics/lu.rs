use super::matrix::{CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// LU with partial pivoting, packed.
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn new(m: &CMatrix) -> Result<Self> {
        let n = m.require_square()?;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (piv, big) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if big == 0.0 {
                singular = true;
                continue;
            }
            if piv != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
                perm.swap(k, piv);
                sign = -sign;
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Lu {
            lu,
            perm,
            sign,
            singular,
        })
    }

    pub fn det(&self) -> C64 {
        if self.singular {
            return ZERO;
        }
        self.lu
            .diag()
            .into_iter()
            .fold(C64::new(self.sign, 0.0), |a, b| a * b)
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.rows();
        if self.singular {
            return Err(Error::InvalidArgument("singular matrix".into()));
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }
}

pub fn det(m: &CMatrix) -> Result<C64> {
    if m.rows() == 0 {
        return Ok(ONE);
    }
    Ok(Lu::new(m)?.det())
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    let n = m.require_square()?;
    let lu = Lu::new(m)?;
    let mut out = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![ZERO; n];
        e[j] = ONE;
        out.set_column(j, &lu.solve(&e)?);
    }
    Ok(out)
}
