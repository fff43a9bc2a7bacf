//! Dense `2^n x 2^n` integer representation of Cl(R^{n,n}) for small `n`.
//!
//! The Witt vectors are Jordan-Wigner ladder operators:
//! `p_i = Z x .. x Z x sigma_p x 1 x .. x 1` with `sigma_p = [[0,0],[1,0]]`,
//! `sigma_q = [[0,1],[0,0]]` and `Z = diag(1,-1)`, tensor factor 1 being the
//! most significant index bit. For `n = 1` this reproduces the EFB matrix
//! layout `[[qp, q], [p, pq]]`.
//!
//! Nothing here uses the EFB sign rule; the oracle exists to check it.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::efb::{EfbBasisElement, FactorCode, GeneratorIndex, Multivector};
use crate::{Error, Result};

pub const ORACLE_MAX_N: u32 = 4;

pub type IntMatrix = DMatrix<i64>;

#[derive(Clone, Debug)]
pub struct DenseOracle {
    n: u32,
    p: Vec<IntMatrix>,
    q: Vec<IntMatrix>,
}

fn ladder(n: u32, i: u32, local: &IntMatrix) -> IntMatrix {
    let z = IntMatrix::from_row_slice(2, 2, &[1, 0, 0, -1]);
    let one = IntMatrix::identity(2, 2);
    let mut out = IntMatrix::identity(1, 1);
    for k in 1..=n {
        let f = if k < i {
            &z
        } else if k == i {
            local
        } else {
            &one
        };
        out = out.kronecker(f);
    }
    out
}

impl DenseOracle {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n > ORACLE_MAX_N {
            return Err(Error::OracleTooLarge {
                n,
                max: ORACLE_MAX_N,
            });
        }
        let sigma_p = IntMatrix::from_row_slice(2, 2, &[0, 0, 1, 0]);
        let sigma_q = IntMatrix::from_row_slice(2, 2, &[0, 1, 0, 0]);
        let p = (1..=n).map(|i| ladder(n, i, &sigma_p)).collect();
        let q = (1..=n).map(|i| ladder(n, i, &sigma_q)).collect();
        Ok(Self { n, p, q })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn identity(&self) -> IntMatrix {
        IntMatrix::identity(self.size(), self.size())
    }

    /// `p_i`, 1-based.
    pub fn p(&self, i: u32) -> &IntMatrix {
        &self.p[i as usize - 1]
    }

    /// `q_i`, 1-based.
    pub fn q(&self, i: u32) -> &IntMatrix {
        &self.q[i as usize - 1]
    }

    pub fn generator(&self, g: GeneratorIndex) -> IntMatrix {
        let i = g.witt_index();
        if g.is_timelike() {
            self.p(i) - self.q(i)
        } else {
            self.p(i) + self.q(i)
        }
    }

    fn factor_matrix(&self, i: u32, f: FactorCode) -> IntMatrix {
        let (p, q) = (self.p(i), self.q(i));
        match f {
            FactorCode::QP => q * p,
            FactorCode::PQ => p * q,
            FactorCode::P => p.clone(),
            FactorCode::Q => q.clone(),
        }
    }

    pub fn basis_matrix(&self, e: &EfbBasisElement) -> Result<IntMatrix> {
        if e.dimension() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: e.dimension(),
            });
        }
        Ok(e.factors()
            .into_iter()
            .enumerate()
            .fold(self.identity(), |acc, (k, f)| {
                acc * self.factor_matrix(k as u32 + 1, f)
            }))
    }

    pub fn mv_to_matrix(&self, a: &Multivector) -> Result<IntMatrix> {
        let mut out = IntMatrix::zeros(self.size(), self.size());
        for (e, c) in a.terms() {
            let c = c
                .to_i64()
                .ok_or_else(|| Error::CoefficientOverflow(c.to_string()))?;
            out += self.basis_matrix(e)? * c;
        }
        Ok(out)
    }
}

pub fn dense_oracle(n: u32) -> Result<DenseOracle> {
    DenseOracle::new(n)
}
