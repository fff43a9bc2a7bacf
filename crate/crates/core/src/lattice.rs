//! The Boolean algebra of idempotents `0/1`-sums of primitive idempotents.
//!
//! [`AtomSet`] is the bit-parallel carrier; [`Multivector`] is the algebraic
//! one. AND is the Clifford product, NOT is `I - s`, OR is
//! `s1 + s2 - s1 s2`. Both carriers are kept and cross-checked.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::efb::{build_identity, embed_factor, EfbBasisElement, FactorCode, Multivector};
use crate::{check_guard, Error, Result};

/// A primitive idempotent, i.e. a full variable assignment.
///
/// Bit `i - 1` set means factor `i` is `q_i p_i` (variable `i` true); clear
/// means `p_i q_i` (false). Displayed as a `0/1` string, variable 1 first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId {
    n: u32,
    bits: u64,
}

impl AtomId {
    pub fn new(n: u32, bits: u64) -> Result<Self> {
        check_guard(n)?;
        if n < 64 && bits >> n != 0 {
            return Err(Error::InvalidParameters(format!(
                "atom bits {bits:#b} do not fit n = {n}"
            )));
        }
        Ok(Self { n, bits })
    }

    pub(crate) fn new_unchecked(n: u32, bits: u64) -> Self {
        Self { n, bits }
    }

    /// Parses a `0/1` string such as `"101"` (variable 1 first).
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let n = s.len() as u32;
        let mut bits = 0u64;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits |= 1 << k,
                '0' => {}
                _ => {
                    return Err(Error::InvalidParameters(format!(
                        "atom string {s:?} must contain only 0 and 1"
                    )))
                }
            }
        }
        Self::new(n, bits)
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Value of variable `i` (1-based).
    pub fn value(&self, i: u32) -> bool {
        debug_assert!(i >= 1 && i <= self.n);
        self.bits >> (i - 1) & 1 == 1
    }

    pub fn flip(&self, i: u32) -> Self {
        Self {
            n: self.n,
            bits: self.bits ^ (1 << (i - 1)),
        }
    }

    pub fn to_basis_element(&self) -> EfbBasisElement {
        EfbBasisElement::atom(self.n, self.bits).expect("atom dimension already validated")
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            f.write_str(if self.value(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AtomId({self})")
    }
}

/// Word patterns: bit `j` of `VAR_PATTERN[k]` is bit `k` of `j`.
const VAR_PATTERN: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// A set of primitive idempotents, i.e. an element of the Boolean algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    n: u32,
    words: Vec<u64>,
}

impl AtomSet {
    pub fn empty(n: u32) -> Result<Self> {
        check_guard(n)?;
        let len = if n <= 6 { 1 } else { 1usize << (n - 6) };
        Ok(Self {
            n,
            words: vec![0; len],
        })
    }

    pub fn full(n: u32) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.trim();
        Ok(s)
    }

    pub fn from_atoms(n: u32, atoms: impl IntoIterator<Item = AtomId>) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for a in atoms {
            s.insert(a)?;
        }
        Ok(s)
    }

    /// Builds a set from a membership predicate over atom bit patterns.
    pub fn from_fn(n: u32, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for bits in 0..s.universe_size() {
            if f(bits) {
                s.words[(bits >> 6) as usize] |= 1 << (bits & 63);
            }
        }
        Ok(s)
    }

    fn tail_mask(&self) -> u64 {
        if self.n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << self.n)) - 1
        }
    }

    fn trim(&mut self) {
        let m = self.tail_mask();
        if let Some(w) = self.words.last_mut() {
            *w &= m;
        }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// `2^n`.
    pub fn universe_size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn check(&self, a: &AtomId) -> Result<()> {
        if a.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: a.n,
            });
        }
        Ok(())
    }

    pub fn insert(&mut self, a: AtomId) -> Result<()> {
        self.check(&a)?;
        self.words[(a.bits >> 6) as usize] |= 1 << (a.bits & 63);
        Ok(())
    }

    pub fn contains(&self, a: &AtomId) -> bool {
        a.n == self.n && self.words[(a.bits >> 6) as usize] >> (a.bits & 63) & 1 == 1
    }

    pub fn contains_bits(&self, bits: u64) -> bool {
        bits < self.universe_size() && self.words[(bits >> 6) as usize] >> (bits & 63) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe_size()
    }

    /// Atoms in ascending bit-pattern order.
    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        let n = self.n;
        self.words.iter().enumerate().flat_map(move |(w, &word)| {
            let base = (w as u64) << 6;
            BitIter(word).map(move |b| AtomId::new_unchecked(n, base + b as u64))
        })
    }

    pub fn first(&self) -> Option<AtomId> {
        self.iter().next()
    }

    pub fn first_missing(&self) -> Option<AtomId> {
        let m = self.tail_mask();
        let last = self.words.len() - 1;
        for (w, &word) in self.words.iter().enumerate() {
            let live = if w == last { m } else { u64::MAX };
            let missing = !word & live;
            if missing != 0 {
                let bits = ((w as u64) << 6) + missing.trailing_zeros() as u64;
                return Some(AtomId::new_unchecked(self.n, bits));
            }
        }
        None
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.same(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self { n: self.n, words })
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a | b)
    }

    pub fn not(&self) -> Self {
        let mut s = Self {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub(crate) fn and_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub(crate) fn or_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Image under toggling variable `i` (1-based) in every atom.
    pub fn flip_var(&self, i: u32) -> Self {
        assert!(i >= 1 && i <= self.n, "variable out of range");
        let k = i - 1;
        let words = if k < 6 {
            let s = 1u32 << k;
            let pat = VAR_PATTERN[k as usize];
            self.words
                .iter()
                .map(|&x| ((x & pat) >> s) | ((x & !pat) << s))
                .collect()
        } else {
            let stride = 1usize << (k - 6);
            (0..self.words.len())
                .map(|w| self.words[w ^ stride])
                .collect()
        };
        Self { n: self.n, words }
    }

    /// The subcube of atoms whose variable `i` equals `value`.
    pub fn subcube(n: u32, i: u32, value: bool) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange {
                what: "variable",
                index: i,
                max: n,
            });
        }
        let mut s = Self::empty(n)?;
        let k = i - 1;
        for (w, word) in s.words.iter_mut().enumerate() {
            let on = if k < 6 {
                VAR_PATTERN[k as usize]
            } else if (w >> (k - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
            *word = if value { on } else { !on };
        }
        s.trim();
        Ok(s)
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.to_string())).finish()
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

pub fn bool_and(s1: &AtomSet, s2: &AtomSet) -> Result<AtomSet> {
    s1.and(s2)
}

pub fn bool_or(s1: &AtomSet, s2: &AtomSet) -> Result<AtomSet> {
    s1.or(s2)
}

pub fn bool_not(s: &AtomSet) -> AtomSet {
    s.not()
}

/// The idempotent of a single literal: `q_i p_i` for `rho_i`, `p_i q_i` for
/// its negation.
pub fn var_idempotent(i: u32, polarity: bool, n: u32) -> Result<AtomSet> {
    AtomSet::subcube(n, i, polarity)
}

/// Multivector form of [`var_idempotent`].
pub fn var_multivector(i: u32, polarity: bool, n: u32) -> Result<Multivector> {
    embed_factor(n, i, if polarity { FactorCode::QP } else { FactorCode::PQ })
}

pub fn multivector_of_atoms(s: &AtomSet) -> Result<Multivector> {
    if s.n == 0 {
        return Err(Error::ZeroDimension);
    }
    Multivector::from_terms(
        s.n,
        s.iter().map(|a| (a.to_basis_element(), BigInt::one())),
    )
}

pub fn atoms_of_multivector(a: &Multivector) -> Result<AtomSet> {
    let n = a.dimension();
    let mut s = AtomSet::empty(n)?;
    for (e, c) in a.terms() {
        if !e.is_atom() {
            return Err(Error::MalformedIdempotent(format!(
                "term [{e}] is not a primitive idempotent"
            )));
        }
        if !c.is_one() {
            return Err(Error::MalformedIdempotent(format!(
                "coefficient {c} on [{e}] is not 0 or 1"
            )));
        }
        s.insert(AtomId::new_unchecked(n, e.h_mask()))?;
    }
    Ok(s)
}

fn huntington_atoms(s1: &AtomSet, s2: &AtomSet) -> Result<bool> {
    let not1 = s1.not();
    let left = not1.and(s2)?.not();
    let right = not1.and(&s2.not())?.not();
    Ok(left.and(&right)? == *s1)
}

fn huntington_multivector(s1: &AtomSet, s2: &AtomSet) -> Result<bool> {
    let id = build_identity(s1.n)?;
    let m1 = multivector_of_atoms(s1)?;
    let m2 = multivector_of_atoms(s2)?;
    let not1 = id.sub(&m1)?;
    let not2 = id.sub(&m2)?;
    let left = id.sub(&not1.mul(&m2)?)?;
    let right = id.sub(&not1.mul(&not2)?)?;
    Ok(left.mul(&right)? == m1)
}

/// `(I - (I - s1) s2)(I - (I - s1)(I - s2)) == s1`, on the bitsets and, for
/// `n <= 4`, also on the multivectors.
pub fn huntington_check(s1: &AtomSet, s2: &AtomSet) -> Result<bool> {
    s1.same(s2)?;
    let mut ok = huntington_atoms(s1, s2)?;
    if (1..=crate::oracle::ORACLE_MAX_N).contains(&s1.n) {
        ok &= huntington_multivector(s1, s2)?;
    }
    Ok(ok)
}

/// A Boolean expression over variables `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolExpr {
    True,
    False,
    Var(u32),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn var(i: u32) -> Self {
        BoolExpr::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    /// Direct evaluation under an assignment.
    pub fn eval(&self, assignment: &AtomId) -> bool {
        match self {
            BoolExpr::True => true,
            BoolExpr::False => false,
            BoolExpr::Var(i) => assignment.value(*i),
            BoolExpr::Not(e) => !e.eval(assignment),
            BoolExpr::And(a, b) => a.eval(assignment) && b.eval(assignment),
            BoolExpr::Or(a, b) => a.eval(assignment) || b.eval(assignment),
        }
    }

    /// The idempotent of the expression, computed on bitsets.
    pub fn to_atoms(&self, n: u32) -> Result<AtomSet> {
        match self {
            BoolExpr::True => AtomSet::full(n),
            BoolExpr::False => AtomSet::empty(n),
            BoolExpr::Var(i) => var_idempotent(*i, true, n),
            BoolExpr::Not(e) => Ok(e.to_atoms(n)?.not()),
            BoolExpr::And(a, b) => a.to_atoms(n)?.and(&b.to_atoms(n)?),
            BoolExpr::Or(a, b) => a.to_atoms(n)?.or(&b.to_atoms(n)?),
        }
    }

    /// The idempotent of the expression, computed by the substitutions
    /// `F -> 0`, `T -> I`, `rho_i -> q_i p_i`, `not s -> I - s`,
    /// `s1 and s2 -> s1 s2`, `s1 or s2 -> s1 + s2 - s1 s2`.
    pub fn to_multivector(&self, n: u32) -> Result<Multivector> {
        match self {
            BoolExpr::True => build_identity(n),
            BoolExpr::False => Ok(Multivector::zero(n)),
            BoolExpr::Var(i) => var_multivector(*i, true, n),
            BoolExpr::Not(e) => build_identity(n)?.sub(&e.to_multivector(n)?),
            BoolExpr::And(a, b) => a.to_multivector(n)?.mul(&b.to_multivector(n)?),
            BoolExpr::Or(a, b) => {
                let a = a.to_multivector(n)?;
                let b = b.to_multivector(n)?;
                a.add(&b)?.sub(&a.mul(&b)?)
            }
        }
    }
}
