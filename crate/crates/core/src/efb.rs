//! Exact arithmetic in Cl(R^{n,n}) over the Extended Fock Basis.
//!
//! Every basis element is a product `psi_1 psi_2 ... psi_n` with each factor
//! one of `q_i p_i`, `p_i q_i`, `p_i`, `q_i`. A factor is identified by two
//! bits: `h` (leftmost null vector is `q_i`) and parity (`p_i`, `q_i` are odd).
//! A basis element packs these into two `u64` masks so products reduce to a
//! few word operations and a popcount.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{check_guard, Error, Result, HARD_MAX_N};

/// One of the four single-index Fock factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorCode {
    /// `q_i p_i`: h = +1, even.
    QP,
    /// `p_i q_i`: h = -1, even.
    PQ,
    /// `p_i`: h = -1, odd.
    P,
    /// `q_i`: h = +1, odd.
    Q,
}

impl FactorCode {
    pub const ALL: [FactorCode; 4] = [FactorCode::QP, FactorCode::PQ, FactorCode::P, FactorCode::Q];

    /// True when the leftmost null vector is `q_i` (h = +1).
    pub fn leftmost_q(self) -> bool {
        matches!(self, FactorCode::QP | FactorCode::Q)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, FactorCode::P | FactorCode::Q)
    }

    /// The `h` sign bit as +1/-1.
    pub fn h(self) -> i8 {
        if self.leftmost_q() {
            1
        } else {
            -1
        }
    }

    /// The `g` parity bit as +1 (even) / -1 (odd).
    pub fn g(self) -> i8 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn from_bits(leftmost_q: bool, odd: bool) -> Self {
        match (leftmost_q, odd) {
            (true, false) => FactorCode::QP,
            (false, false) => FactorCode::PQ,
            (false, true) => FactorCode::P,
            (true, true) => FactorCode::Q,
        }
    }

    pub fn from_signs(h: i8, g: i8) -> Self {
        Self::from_bits(h > 0, g < 0)
    }

    /// True when the rightmost null vector is `p_i`.
    fn rightmost_p(self) -> bool {
        self.leftmost_q() ^ self.is_odd()
    }
}

impl fmt::Display for FactorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorCode::QP => "qp",
            FactorCode::PQ => "pq",
            FactorCode::P => "p",
            FactorCode::Q => "q",
        })
    }
}

/// Product of two factors with the same index. `None` is zero.
///
/// The product survives only when the rightmost vector of `x` differs from the
/// leftmost vector of `y` (`p^2 = q^2 = 0`); the result keeps `x`'s leftmost
/// vector and `y`'s rightmost one, with coefficient +1 since `qpq = q` and
/// `pqp = p`.
pub fn factor_product(x: FactorCode, y: FactorCode) -> Option<FactorCode> {
    if x.rightmost_p() != y.leftmost_q() {
        return None;
    }
    let left_q = x.leftmost_q();
    let right_p = y.rightmost_p();
    // q...p is even, q...q odd, p...q even, p...p odd.
    Some(FactorCode::from_bits(left_q, left_q != right_p))
}

fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A simple spinor of the Extended Fock Basis.
///
/// Position `k` (0-based) holds the factor of Witt index `k + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EfbBasisElement {
    n: u32,
    h: u64,
    odd: u64,
}

impl EfbBasisElement {
    pub fn new(factors: &[FactorCode]) -> Result<Self> {
        let n = factors.len() as u32;
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n > HARD_MAX_N {
            return Err(Error::GuardExceeded { n, max: HARD_MAX_N });
        }
        let mut h = 0u64;
        let mut odd = 0u64;
        for (k, f) in factors.iter().enumerate() {
            if f.leftmost_q() {
                h |= 1 << k;
            }
            if f.is_odd() {
                odd |= 1 << k;
            }
        }
        Ok(Self { n, h, odd })
    }

    /// Builds an element from raw masks: bit `k` of `h` set means the factor at
    /// position `k` starts with `q`; bit `k` of `odd` means it is a single vector.
    pub fn from_masks(n: u32, h: u64, odd: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n > HARD_MAX_N {
            return Err(Error::GuardExceeded { n, max: HARD_MAX_N });
        }
        Ok(Self {
            n,
            h: h & mask(n),
            odd: odd & mask(n),
        })
    }

    /// The primitive idempotent whose bit `k` selects `q p` (set) or `p q`.
    pub fn atom(n: u32, bits: u64) -> Result<Self> {
        Self::from_masks(n, bits, 0)
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn h_mask(&self) -> u64 {
        self.h
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn factor(&self, k: usize) -> FactorCode {
        assert!(k < self.n as usize, "factor position out of range");
        FactorCode::from_bits(self.h >> k & 1 == 1, self.odd >> k & 1 == 1)
    }

    pub fn factors(&self) -> Vec<FactorCode> {
        (0..self.n as usize).map(|k| self.factor(k)).collect()
    }

    /// Overall parity: +1 even, -1 odd.
    pub fn parity(&self) -> i8 {
        if self.odd.count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_atom(&self) -> bool {
        self.odd == 0
    }

    /// Product with the anticommutation sign. `None` is zero.
    pub fn product(&self, other: &Self) -> Result<Option<(i8, Self)>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.product_unchecked(other))
    }

    fn product_unchecked(&self, y: &Self) -> Option<(i8, Self)> {
        let m = mask(self.n);
        let right_p = self.h ^ self.odd;
        if (right_p ^ y.h) & m != 0 {
            return None;
        }
        let right_p_y = y.h ^ y.odd;
        let h = self.h;
        let odd = (h ^ right_p_y) & m;
        Some((
            cross_sign(self.odd, y.odd),
            Self { n: self.n, h, odd },
        ))
    }
}

/// Sign of reordering `x_1..x_n y_1..y_n` into `(x_1 y_1)..(x_n y_n)`: each
/// odd `y_i` passes every odd `x_j` with `j > i`.
fn cross_sign(x_odd: u64, y_odd: u64) -> i8 {
    // bit i of `suffix` = parity of the odd x factors strictly above i
    let mut suffix = x_odd >> 1;
    suffix ^= suffix >> 1;
    suffix ^= suffix >> 2;
    suffix ^= suffix >> 4;
    suffix ^= suffix >> 8;
    suffix ^= suffix >> 16;
    suffix ^= suffix >> 32;
    if (suffix & y_odd).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Free-function form of [`EfbBasisElement::product`].
pub fn efb_product(
    x: &EfbBasisElement,
    y: &EfbBasisElement,
) -> Result<Option<(i8, EfbBasisElement)>> {
    x.product(y)
}

impl fmt::Debug for EfbBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EfbBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n as usize {
            if k > 0 {
                f.write_str(" ")?;
            }
            match self.factor(k) {
                FactorCode::QP => write!(f, "q{0}p{0}", k + 1)?,
                FactorCode::PQ => write!(f, "p{0}q{0}", k + 1)?,
                FactorCode::P => write!(f, "p{}", k + 1)?,
                FactorCode::Q => write!(f, "q{}", k + 1)?,
            }
        }
        Ok(())
    }
}

/// Index of an orthonormal generator `gamma_i`, `1 <= i <= 2n`.
///
/// `i <= n` is spacelike (`gamma_i^2 = +1`), `i > n` timelike (`-1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorIndex {
    index: u32,
    n: u32,
}

impl GeneratorIndex {
    pub fn new(index: u32, n: u32) -> Result<Self> {
        if index == 0 || index > 2 * n {
            return Err(Error::IndexOutOfRange {
                what: "generator",
                index,
                max: 2 * n,
            });
        }
        Ok(Self { index, n })
    }

    pub fn all(n: u32) -> impl Iterator<Item = GeneratorIndex> {
        (1..=2 * n).map(move |index| GeneratorIndex { index, n })
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_timelike(&self) -> bool {
        self.index > self.n
    }

    /// The Witt index `i` this generator mixes (`gamma_i` and `gamma_{i+n}`
    /// both live in span{p_i, q_i}).
    pub fn witt_index(&self) -> u32 {
        (self.index - 1) % self.n + 1
    }
}

/// A finite exact-integer combination of EFB elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Multivector {
    n: u32,
    terms: BTreeMap<EfbBasisElement, BigInt>,
}

impl Multivector {
    pub fn zero(n: u32) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_basis(e: EfbBasisElement) -> Self {
        Self::from_term(e, BigInt::one())
    }

    pub fn from_term(e: EfbBasisElement, coefficient: BigInt) -> Self {
        let mut mv = Self::zero(e.dimension());
        if !coefficient.is_zero() {
            mv.terms.insert(e, coefficient);
        }
        mv
    }

    /// Builds from `(element, coefficient)` pairs, merging repeats.
    pub fn from_terms(
        n: u32,
        terms: impl IntoIterator<Item = (EfbBasisElement, BigInt)>,
    ) -> Result<Self> {
        let mut mv = Self::zero(n);
        for (e, c) in terms {
            if e.dimension() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: e.dimension(),
                });
            }
            mv.accumulate(e, c);
        }
        Ok(mv)
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EfbBasisElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &EfbBasisElement) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    fn accumulate(&mut self, e: EfbBasisElement, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(*e, c.clone());
        }
        Ok(out)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(*e, -c.clone());
        }
        Ok(out)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Clifford product.
    ///
    /// `x * y` is nonzero only when `h(y) = h(x) xor odd(x)`, so the right
    /// operand is bucketed by its `h` mask and each left term meets only its
    /// compatible bucket.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut buckets: HashMap<u64, Vec<(&EfbBasisElement, &BigInt)>> = HashMap::new();
        for (e, c) in &other.terms {
            buckets.entry(e.h).or_default().push((e, c));
        }
        let mut out = Self::zero(self.n);
        for (x, cx) in &self.terms {
            let Some(bucket) = buckets.get(&(x.h ^ x.odd)) else {
                continue;
            };
            for (y, cy) in bucket {
                let (sign, e) = x
                    .product_unchecked(y)
                    .expect("bucketed factors are compatible");
                let c = cx * *cy;
                out.accumulate(e, if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// True when every coefficient is +1 and every term is a primitive
    /// idempotent.
    pub fn is_atom_sum(&self) -> bool {
        self.terms.iter().all(|(e, c)| e.is_atom() && c.is_one())
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }
}

/// Free-function form of [`Multivector::mul`].
pub fn mv_mul(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.mul(b)
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})[{e}]")?;
        }
        Ok(())
    }
}

fn check_efb_dimension(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    check_guard(n)
}

/// The identity: the expansion of `prod_i {q_i, p_i}`, i.e. the sum of all
/// `2^n` primitive idempotents with coefficient +1.
pub fn build_identity(n: u32) -> Result<Multivector> {
    check_efb_dimension(n)?;
    let terms = (0..1u64 << n).map(|bits| (EfbBasisElement { n, h: bits, odd: 0 }, BigInt::one()));
    Multivector::from_terms(n, terms)
}

/// The volume element `gamma_1 ... gamma_2n`, built as
/// `(-1)^{n(n-1)/2} prod_i [q_i, p_i]` expanded in the EFB.
pub fn build_omega(n: u32) -> Result<Multivector> {
    check_efb_dimension(n)?;
    let global_negative = (n as u64 * (n as u64 - 1) / 2) % 2 == 1;
    let terms = (0..1u64 << n).map(|bits| {
        // [q,p] = qp - pq: each p q factor contributes -1
        let pq_count = n - bits.count_ones();
        let negative = global_negative ^ (pq_count % 2 == 1);
        let c = if negative { -BigInt::one() } else { BigInt::one() };
        (EfbBasisElement { n, h: bits, odd: 0 }, c)
    });
    Multivector::from_terms(n, terms)
}

/// A single-index factor at Witt index `i` (1-based), multiplied by the
/// identity on every other index.
pub fn embed_factor(n: u32, i: u32, factor: FactorCode) -> Result<Multivector> {
    check_efb_dimension(n)?;
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange {
            what: "Witt",
            index: i,
            max: n,
        });
    }
    let k = i - 1;
    let others = mask(n) & !(1u64 << k);
    let fixed_h = if factor.leftmost_q() { 1u64 << k } else { 0 };
    let fixed_odd = if factor.is_odd() { 1u64 << k } else { 0 };
    let terms = (0..1u64 << n)
        .filter(|bits| bits & !others == 0)
        .map(|bits| {
            (
                EfbBasisElement {
                    n,
                    h: bits | fixed_h,
                    odd: fixed_odd,
                },
                BigInt::one(),
            )
        });
    Multivector::from_terms(n, terms)
}

/// The Witt null vector `p_i`.
pub fn witt_p(n: u32, i: u32) -> Result<Multivector> {
    embed_factor(n, i, FactorCode::P)
}

/// The Witt null vector `q_i`.
pub fn witt_q(n: u32, i: u32) -> Result<Multivector> {
    embed_factor(n, i, FactorCode::Q)
}

/// `gamma_i = p_i + q_i` for `i <= n`, `gamma_{i+n} = p_i - q_i`.
pub fn generator(g: GeneratorIndex) -> Result<Multivector> {
    let i = g.witt_index();
    let p = witt_p(g.n, i)?;
    let q = witt_q(g.n, i)?;
    if g.is_timelike() {
        p.sub(&q)
    } else {
        p.add(&q)
    }
}

/// `gamma_i A gamma_i^{-1}`, with `gamma_i^{-1} = gamma_i` (spacelike) or
/// `-gamma_i` (timelike).
pub fn conjugate_by_generator(a: &Multivector, g: GeneratorIndex) -> Result<Multivector> {
    if a.dimension() != g.n {
        return Err(Error::DimensionMismatch {
            left: a.dimension(),
            right: g.n,
        });
    }
    let gamma = generator(g)?;
    let conj = gamma.mul(a)?.mul(&gamma)?;
    Ok(if g.is_timelike() { conj.neg() } else { conj })
}
