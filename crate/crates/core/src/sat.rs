//! CNF formulas and their encoding as idempotents.
//!
//! A clause `C_j` encodes as `I - z_j`, where `z_j` is the product of its
//! negated literals (the unique partial assignment that falsifies it). The
//! formula encodes as `S = prod_j (I - z_j)`, whose atoms are exactly the
//! satisfying assignments.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::efb::{build_identity, Multivector};
use crate::lattice::{AtomId, AtomSet};
use crate::{check_guard, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub variable: u32,
    pub negated: bool,
}

impl Literal {
    pub fn positive(variable: u32) -> Self {
        Self {
            variable,
            negated: false,
        }
    }

    pub fn negative(variable: u32) -> Self {
        Self {
            variable,
            negated: true,
        }
    }

    /// From a DIMACS-style signed integer. Zero is not a literal.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 || lit.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Self {
            variable: lit.unsigned_abs() as u32,
            negated: lit < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.variable as i64)
        } else {
            self.variable as i64
        }
    }

    pub fn is_satisfied_by(&self, a: &AtomId) -> bool {
        a.value(self.variable) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals over distinct variables.
///
/// Repeated literals are merged. A variable appearing with both polarities
/// makes the clause a tautology; it is kept and flagged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
    tautology: bool,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        literals.dedup();
        let tautology = literals
            .windows(2)
            .any(|w| w[0].variable == w[1].variable);
        Self {
            literals,
            tautology,
        }
    }

    pub fn from_dimacs(lits: &[i64]) -> Option<Self> {
        lits.iter()
            .map(|&l| Literal::from_dimacs(l))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.tautology
    }

    pub fn is_satisfied_by(&self, a: &AtomId) -> bool {
        self.literals.iter().any(|l| l.is_satisfied_by(a))
    }

    /// The partial assignment falsifying every literal.
    pub fn falsifying_cube(&self) -> Option<FalsifyingCube> {
        if self.tautology {
            return None;
        }
        Some(FalsifyingCube {
            values: self
                .literals
                .iter()
                .map(|l| (l.variable, l.negated))
                .collect(),
        })
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, l) in self.literals.iter().enumerate() {
            if k > 0 {
                f.write_str(" v ")?;
            }
            if l.negated {
                write!(f, "~x{}", l.variable)?;
            } else {
                write!(f, "x{}", l.variable)?;
            }
        }
        f.write_str(")")
    }
}

/// `z_j`: a partial assignment, variable -> value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalsifyingCube {
    pub values: BTreeMap<u32, bool>,
}

impl FalsifyingCube {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_atoms(&self, n: u32) -> Result<AtomSet> {
        let mut s = AtomSet::full(n)?;
        for (&var, &value) in &self.values {
            s.and_assign(&AtomSet::subcube(n, var, value)?);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    n: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            for l in c.literals() {
                if l.variable == 0 || l.variable > n {
                    return Err(Error::IndexOutOfRange {
                        what: "variable",
                        index: l.variable,
                        max: n,
                    });
                }
            }
        }
        Ok(Self { n, clauses })
    }

    /// From DIMACS-style signed clauses.
    pub fn from_dimacs(n: u32, clauses: &[Vec<i64>]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| {
                Clause::from_dimacs(c)
                    .ok_or_else(|| Error::InvalidParameters(format!("bad literal in {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, clauses)
    }

    pub fn num_vars(&self) -> u32 {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_satisfied_by(&self, a: &AtomId) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied_by(a))
    }

    pub fn has_tautology(&self) -> bool {
        self.clauses.iter().any(Clause::is_tautology)
    }

    /// `rho_var := value`: satisfied clauses are dropped and falsified
    /// literals stripped. The variable count is unchanged.
    pub fn assign(&self, var: u32, value: bool) -> Self {
        let clauses = self
            .clauses
            .iter()
            .filter(|c| {
                !c.literals()
                    .iter()
                    .any(|l| l.variable == var && l.negated != value)
            })
            .map(|c| {
                Clause::new(
                    c.literals()
                        .iter()
                        .copied()
                        .filter(|l| l.variable != var),
                )
            })
            .collect();
        Self { n: self.n, clauses }
    }

    /// Drops tautological clauses (each encodes to `I`).
    pub fn without_tautologies(&self) -> Self {
        Self {
            n: self.n,
            clauses: self
                .clauses
                .iter()
                .filter(|c| !c.is_tautology())
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("T");
        }
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseEncoding {
    pub atoms: AtomSet,
    /// Set when the clause was a tautology and encoded as `I`.
    pub tautology: bool,
}

/// `I - z_j` as an atom set.
pub fn encode_clause(c: &Clause, n: u32) -> Result<ClauseEncoding> {
    if c.is_tautology() {
        return Ok(ClauseEncoding {
            atoms: AtomSet::full(n)?,
            tautology: true,
        });
    }
    // I - z_j is the union of the literal subcubes; the empty clause is 0.
    let mut s = AtomSet::empty(n)?;
    for l in c.literals() {
        s.or_assign(&AtomSet::subcube(n, l.variable, !l.negated)?);
    }
    Ok(ClauseEncoding {
        atoms: s,
        tautology: false,
    })
}

/// `I - z_j` as a multivector, built from the identity and the literal
/// idempotents.
pub fn encode_clause_multivector(c: &Clause, n: u32) -> Result<Multivector> {
    let id = build_identity(n)?;
    if c.is_tautology() {
        return Ok(id);
    }
    let mut z = id.clone();
    for l in c.literals() {
        z = z.mul(&crate::lattice::var_multivector(l.variable, l.negated, n)?)?;
    }
    id.sub(&z)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodeStats {
    /// Sum of working-set populations after each intersection.
    pub atoms_examined: u64,
    pub tautologies: u64,
}

/// `S = prod_j (I - z_j)` as an atom set.
pub fn encode_cnf(f: &CnfFormula) -> Result<AtomSet> {
    encode_cnf_with_stats(f).map(|(s, _)| s)
}

/// Clauses are intersected smallest population first so the working set
/// shrinks early; the result does not depend on the order.
pub fn encode_cnf_with_stats(f: &CnfFormula) -> Result<(AtomSet, EncodeStats)> {
    let n = f.num_vars();
    let mut stats = EncodeStats::default();
    let mut encoded = Vec::with_capacity(f.num_clauses());
    for c in f.clauses() {
        let e = encode_clause(c, n)?;
        if e.tautology {
            stats.tautologies += 1;
            continue;
        }
        encoded.push((e.atoms.count(), e.atoms));
    }
    encoded.sort_by_key(|(count, _)| *count);
    let mut s = AtomSet::full(n)?;
    for (_, atoms) in &encoded {
        s.and_assign(atoms);
        let population = s.count();
        stats.atoms_examined += population;
        if population == 0 {
            break;
        }
    }
    Ok((s, stats))
}

/// `S` as a multivector: the literal product of the clause encodings.
pub fn encode_cnf_multivector(f: &CnfFormula) -> Result<Multivector> {
    let n = f.num_vars();
    let mut s = build_identity(n)?;
    for c in f.clauses() {
        s = s.mul(&encode_clause_multivector(c, n)?)?;
    }
    Ok(s)
}

/// The full DNF: every satisfying atom, ascending.
pub fn dnf_expand(f: &CnfFormula) -> Result<Vec<AtomId>> {
    Ok(encode_cnf(f)?.iter().collect())
}

/// Ground truth by evaluating every assignment against every clause.
pub fn brute_force_oracle(f: &CnfFormula) -> Result<Vec<AtomId>> {
    let n = f.num_vars();
    check_guard(n)?;
    let mut out = Vec::new();
    for bits in 0..1u64 << n {
        let a = AtomId::new_unchecked(n, bits);
        let sat = f.clauses().iter().all(|c| {
            c.literals()
                .iter()
                .any(|l| (bits >> (l.variable - 1) & 1 == 1) != l.negated)
        });
        if sat {
            out.push(a);
        }
    }
    Ok(out)
}

/// Variable values `1..=n` of an atom, index 0 holding variable 1.
pub fn assignment_of_atom(a: &AtomId) -> Vec<bool> {
    (1..=a.dimension()).map(|i| a.value(i)).collect()
}

pub fn atom_of_assignment(values: &[bool]) -> Result<AtomId> {
    let n = values.len() as u32;
    let bits = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v)
        .fold(0u64, |acc, (k, _)| acc | 1 << k);
    AtomId::new(n, bits)
}

/// The atom as DIMACS-style signed literals.
pub fn witness_literals(a: &AtomId) -> Vec<i64> {
    (1..=a.dimension())
        .map(|i| if a.value(i) { i as i64 } else { -(i as i64) })
        .collect()
}

/// Atoms of a 1SAT conjunction: `2^{n-m}` of them for `m` distinct variables.
pub fn conjunction_atoms(n: u32, literals: &[Literal]) -> Result<AtomSet> {
    let mut s = AtomSet::full(n)?;
    for l in literals {
        s.and_assign(&AtomSet::subcube(n, l.variable, !l.negated)?);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub atoms_examined: u64,
    pub clauses: u64,
    pub expansion_size: u64,
    pub test_rounds: u64,
    pub test_invocations: u64,
    pub samples: u64,
    pub classified: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub status: Status,
    pub witness: Option<AtomId>,
    pub method: &'static str,
    pub counters: Counters,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (x1 v ~x2)(x2 v x3)(~x1 v ~x3)(~x1 v ~x2 v x3)(x1 v x2 v ~x3)
    fn paper_instance() -> CnfFormula {
        CnfFormula::from_dimacs(
            3,
            &[
                vec![1, -2],
                vec![2, 3],
                vec![-1, -3],
                vec![-1, -2, 3],
                vec![1, 2, -3],
            ],
        )
        .unwrap()
    }

    fn truth_table(f: &CnfFormula) -> Vec<AtomId> {
        let n = f.num_vars();
        (0..1u64 << n)
            .map(|b| AtomId::new(n, b).unwrap())
            .filter(|a| f.is_satisfied_by(a))
            .collect()
    }

    #[test]
    fn clause_with_two_literals_n3() {
        let c = Clause::new([Literal::positive(1), Literal::negative(2)]);
        let e = encode_clause(&c, 3).unwrap();
        assert_eq!(e.atoms.count(), 6);
        for a in e.atoms.iter() {
            assert!(a.value(1) || !a.value(2));
        }
    }

    #[test]
    fn unit_clause_n1() {
        let c = Clause::new([Literal::positive(1)]);
        let e = encode_clause(&c, 1).unwrap();
        assert_eq!(e.atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(), ["1"]);
    }

    #[test]
    fn full_width_clause_excludes_one_atom() {
        for n in 1..=8u32 {
            let c = Clause::new((1..=n).map(Literal::negative));
            let e = encode_clause(&c, n).unwrap();
            assert_eq!(e.atoms.count(), (1 << n) - 1);
            assert!(!e.atoms.contains(&AtomId::new(n, (1 << n) - 1).unwrap()));
        }
    }

    #[test]
    fn tautology_encodes_to_identity() {
        let c = Clause::new([Literal::positive(2), Literal::negative(2)]);
        assert!(c.is_tautology());
        let e = encode_clause(&c, 3).unwrap();
        assert!(e.tautology);
        assert!(e.atoms.is_full());
        assert!(c.falsifying_cube().is_none());
    }

    #[test]
    fn duplicate_literals_merge() {
        let c = Clause::new([Literal::positive(1), Literal::positive(1)]);
        assert_eq!(c.len(), 1);
        assert!(!c.is_tautology());
    }

    #[test]
    fn empty_clause_is_zero() {
        let f = CnfFormula::new(2, vec![Clause::new([])]).unwrap();
        assert!(encode_cnf(&f).unwrap().is_empty());
    }

    #[test]
    fn paper_instance_is_unsat() {
        let f = paper_instance();
        assert!(encode_cnf(&f).unwrap().is_empty());
        assert!(dnf_expand(&f).unwrap().is_empty());
        assert!(brute_force_oracle(&f).unwrap().is_empty());
    }

    #[test]
    fn no_clauses_is_identity() {
        let f = CnfFormula::new(2, vec![]).unwrap();
        assert!(encode_cnf(&f).unwrap().is_full());
        assert_eq!(dnf_expand(&f).unwrap().len(), 4);
    }

    #[test]
    fn single_clause_truth_table() {
        let f = CnfFormula::from_dimacs(2, &[vec![1, 2]]).unwrap();
        let dnf = dnf_expand(&f).unwrap();
        assert_eq!(dnf.len(), 3);
        assert_eq!(dnf, truth_table(&f));
    }

    #[test]
    fn oracle_unit() {
        let f = CnfFormula::from_dimacs(1, &[vec![1]]).unwrap();
        let sols = brute_force_oracle(&f).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].to_string(), "1");
    }

    #[test]
    fn assignment_round_trip() {
        let a = AtomId::from_bit_str("111").unwrap();
        assert_eq!(assignment_of_atom(&a), vec![true, true, true]);
        let a = AtomId::from_bit_str("10").unwrap();
        assert_eq!(witness_literals(&a), vec![1, -2]);
        for n in 0..=10u32 {
            for bits in 0..1u64 << n {
                let a = AtomId::new(n, bits).unwrap();
                assert_eq!(atom_of_assignment(&assignment_of_atom(&a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn out_of_range_literal_rejected() {
        assert!(CnfFormula::from_dimacs(2, &[vec![3]]).is_err());
    }

    #[test]
    fn assign_simplifies() {
        let f = CnfFormula::from_dimacs(2, &[vec![1, 2], vec![-1]]).unwrap();
        let g = f.assign(1, true);
        assert_eq!(g.num_clauses(), 1);
        assert!(g.clauses().iter().any(Clause::is_empty));
        let h = f.assign(1, false);
        assert_eq!(h.clauses(), &[Clause::new([Literal::positive(2)])]);
    }

    #[test]
    fn multivector_encoding_matches_atoms() {
        let f = paper_instance();
        assert!(encode_cnf_multivector(&f).unwrap().is_zero());
        let g = CnfFormula::from_dimacs(3, &[vec![1, -2], vec![2, 3]]).unwrap();
        let mv = encode_cnf_multivector(&g).unwrap();
        assert_eq!(crate::lattice::atoms_of_multivector(&mv).unwrap(), encode_cnf(&g).unwrap());
    }
}
