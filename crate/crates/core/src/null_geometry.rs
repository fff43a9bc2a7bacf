//! Atoms, maximal totally null subspaces and `O(1)^n`.
//!
//! Convention: atom bit `i` set (variable true, factor `q_i p_i`) selects
//! `q_i` as the `i`-th spanning vector of `M`, and the sign `lambda_i = -1`.
//! The vacuum atom `prod p_i q_i` maps to `P = span{p_1..p_n}` and to the
//! identity of `O(1)^n`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::lattice::{AtomId, AtomSet};
use crate::oracle::{DenseOracle, IntMatrix};
use crate::sat::{Clause, CnfFormula, Status};
use crate::{check_guard, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NullChoice {
    P,
    Q,
}

/// A Witt null vector `p_i` or `q_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WittVector {
    pub index: u32,
    pub kind: NullChoice,
}

impl WittVector {
    pub fn matrix(&self, oracle: &DenseOracle) -> IntMatrix {
        match self.kind {
            NullChoice::P => oracle.p(self.index).clone(),
            NullChoice::Q => oracle.q(self.index).clone(),
        }
    }

    /// The other vector of the same hyperbolic pair.
    pub fn partner(&self) -> Self {
        Self {
            index: self.index,
            kind: match self.kind {
                NullChoice::P => NullChoice::Q,
                NullChoice::Q => NullChoice::P,
            },
        }
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NullChoice::P => write!(f, "p{}", self.index),
            NullChoice::Q => write!(f, "q{}", self.index),
        }
    }
}

/// `span{x_1, .., x_n}` with each `x_i` one of `p_i`, `q_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MaxNullSubspace {
    n: u32,
    q_mask: u64,
}

impl MaxNullSubspace {
    pub fn from_choices(choices: &[NullChoice]) -> Result<Self> {
        let n = choices.len() as u32;
        check_guard(n)?;
        let q_mask = choices
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == NullChoice::Q)
            .fold(0u64, |m, (k, _)| m | 1 << k);
        Ok(Self { n, q_mask })
    }

    /// `P = span{p_1, .., p_n}`.
    pub fn reference(n: u32) -> Self {
        Self { n, q_mask: 0 }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn choice(&self, i: u32) -> NullChoice {
        if self.q_mask >> (i - 1) & 1 == 1 {
            NullChoice::Q
        } else {
            NullChoice::P
        }
    }

    pub fn choices(&self) -> Vec<NullChoice> {
        (1..=self.n).map(|i| self.choice(i)).collect()
    }

    pub fn spanning_vectors(&self) -> Vec<WittVector> {
        (1..=self.n)
            .map(|i| WittVector {
                index: i,
                kind: self.choice(i),
            })
            .collect()
    }
}

impl fmt::Display for MaxNullSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("span{")?;
        for (k, v) in self.spanning_vectors().iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// An element of `O(1)^n`: a diagonal `+-1` matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureLambda {
    n: u32,
    minus_mask: u64,
}

impl SignatureLambda {
    pub fn identity(n: u32) -> Self {
        Self { n, minus_mask: 0 }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let n = signs.len() as u32;
        check_guard(n)?;
        let mut minus_mask = 0u64;
        for (k, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => minus_mask |= 1 << k,
                _ => {
                    return Err(Error::InvalidParameters(format!(
                        "sign {s} at position {} is not +1 or -1",
                        k + 1
                    )))
                }
            }
        }
        Ok(Self { n, minus_mask })
    }

    pub(crate) fn from_mask(n: u32, minus_mask: u64) -> Self {
        Self { n, minus_mask }
    }

    /// `lambda_i`: the reflection inverting the `i`-th timelike generator.
    pub fn reflection(i: u32, n: u32) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange {
                what: "reflection",
                index: i,
                max: n,
            });
        }
        Ok(Self {
            n,
            minus_mask: 1 << (i - 1),
        })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn minus_mask(&self) -> u64 {
        self.minus_mask
    }

    pub fn minus_count(&self) -> u32 {
        self.minus_mask.count_ones()
    }

    pub fn sign(&self, i: u32) -> i8 {
        if self.minus_mask >> (i - 1) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (1..=self.n).map(|i| self.sign(i)).collect()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            minus_mask: self.minus_mask ^ other.minus_mask,
        })
    }

    /// Action on `M`: every `-1` entry swaps `p_i <-> q_i`.
    pub fn act(&self, m: &MaxNullSubspace) -> MaxNullSubspace {
        MaxNullSubspace {
            n: m.n,
            q_mask: m.q_mask ^ self.minus_mask,
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n as usize, self.n as usize, |r, c| {
            if r == c {
                self.sign(r as u32 + 1) as f64
            } else {
                0.0
            }
        })
    }
}

impl fmt::Display for SignatureLambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 1..=self.n {
            if i > 1 {
                f.write_str(",")?;
            }
            f.write_str(if self.sign(i) < 0 { "-" } else { "+" })?;
        }
        f.write_str(")")
    }
}

impl Serialize for SignatureLambda {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.signs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignatureLambda {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let signs = Vec::<i8>::deserialize(deserializer)?;
        Self::from_signs(&signs).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for SignatureLambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignatureLambda{self}")
    }
}

pub fn m_of_atom(a: &AtomId) -> MaxNullSubspace {
    MaxNullSubspace {
        n: a.dimension(),
        q_mask: a.bits(),
    }
}

pub fn atom_of_m(m: &MaxNullSubspace) -> AtomId {
    AtomId::new_unchecked(m.n, m.q_mask)
}

/// The unique `lambda` with `lambda(P) = m`.
pub fn lambda_of_m(m: &MaxNullSubspace) -> SignatureLambda {
    SignatureLambda {
        n: m.n,
        minus_mask: m.q_mask,
    }
}

pub fn m_of_lambda(l: &SignatureLambda) -> MaxNullSubspace {
    l.act(&MaxNullSubspace::reference(l.n))
}

pub fn lambda_of_atom(a: &AtomId) -> SignatureLambda {
    lambda_of_m(&m_of_atom(a))
}

pub fn atom_of_lambda(l: &SignatureLambda) -> AtomId {
    atom_of_m(&m_of_lambda(l))
}

/// True when `v * f = 0` in the dense representation.
pub fn annihilates(oracle: &DenseOracle, v: WittVector, a: &AtomId) -> Result<bool> {
    let f = oracle.basis_matrix(&a.to_basis_element())?;
    let prod = v.matrix(oracle) * f;
    Ok(prod.iter().all(|&x| x == 0))
}

/// Every spanning vector of `M(a)` annihilates the idempotent of `a`.
pub fn annihilation_check(a: &AtomId) -> Result<bool> {
    let oracle = DenseOracle::new(a.dimension())?;
    for v in m_of_atom(a).spanning_vectors() {
        if !annihilates(&oracle, v, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `T'` of a clause: the `lambda` of every atom of `z_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPrimeSet {
    members: AtomSet,
    pub tautology: bool,
}

impl TPrimeSet {
    pub fn len(&self) -> u64 {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, l: &SignatureLambda) -> bool {
        self.members.contains_bits(l.minus_mask)
    }

    pub fn iter(&self) -> impl Iterator<Item = SignatureLambda> + '_ {
        self.members.iter().map(|a| lambda_of_atom(&a))
    }

    /// The underlying bitset, indexed by `minus_mask`.
    pub fn as_atom_set(&self) -> &AtomSet {
        &self.members
    }
}

pub fn tprime_of_clause(c: &Clause, n: u32) -> Result<TPrimeSet> {
    match c.falsifying_cube() {
        None => Ok(TPrimeSet {
            members: AtomSet::empty(n)?,
            tautology: true,
        }),
        Some(z) => {
            if let Some((&var, _)) = z.values.iter().find(|(&v, _)| v == 0 || v > n) {
                return Err(Error::IndexOutOfRange {
                    what: "variable",
                    index: var,
                    max: n,
                });
            }
            Ok(TPrimeSet {
                members: z.to_atoms(n)?,
                tautology: false,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverVerdict {
    pub status: Status,
    /// `|union_j T'_{z_j}|`.
    pub covered: u64,
    pub group_order: u64,
    pub witness: Option<SignatureLambda>,
}

/// The clauses' `T'` sets cover `O(1)^n` iff the formula is unsatisfiable;
/// an uncovered `lambda` is a solution.
pub fn o1n_cover_test(f: &CnfFormula) -> Result<CoverVerdict> {
    let n = f.num_vars();
    let mut union = AtomSet::empty(n)?;
    for c in f.clauses() {
        let t = tprime_of_clause(c, n)?;
        union.or_assign(&t.members);
        if union.is_full() {
            break;
        }
    }
    let witness = union
        .first_missing()
        .map(|a| SignatureLambda::from_mask(n, a.bits()));
    Ok(CoverVerdict {
        status: if witness.is_some() {
            Status::Sat
        } else {
            Status::Unsat
        },
        covered: union.count(),
        group_order: union.universe_size(),
        witness,
    })
}
