//! Unsatisfiability as symmetry: a nonempty problem `S` is unsatisfiable iff
//! `gamma_i S gamma_i^{-1} = S` for every generator, and a witness follows by
//! fixing one variable at a time and re-running the test.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::efb::{conjugate_by_generator, GeneratorIndex};
use crate::lattice::AtomId;
use crate::sat::{encode_cnf, encode_cnf_multivector, CnfFormula, Counters, SolveReport, Status};
use crate::{Error, Result};

/// Largest `n` accepted by the multivector backend.
pub const MULTIVECTOR_BACKEND_MAX_N: u32 = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Conjugation acts on atoms as a bit flip; checks flip invariance.
    #[default]
    Atomset,
    /// Builds `S` in the EFB and conjugates it term by term.
    Multivector,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Atomset => "atomset",
            Backend::Multivector => "multivector",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// Entry `i - 1` is true when `S` is fixed by conjugation with `gamma_i`.
    pub symmetric_under: Vec<bool>,
    pub verdict: Status,
    pub backend: Backend,
}

/// The involution that conjugation by `gamma_i` induces on atoms: it toggles
/// variable `((i - 1) mod n) + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomAction {
    variable: u32,
}

impl AtomAction {
    pub fn variable(&self) -> u32 {
        self.variable
    }

    pub fn apply(&self, a: AtomId) -> AtomId {
        a.flip(self.variable)
    }
}

pub fn conjugation_action_on_atoms(g: GeneratorIndex) -> AtomAction {
    AtomAction {
        variable: g.witt_index(),
    }
}

fn check_hypothesis(f: &CnfFormula) -> Result<()> {
    if f.num_clauses() == 0 {
        return Err(Error::EmptyProblem);
    }
    for (k, c) in f.clauses().iter().enumerate() {
        if c.is_empty() {
            return Err(Error::Precondition {
                clause: k + 1,
                reason: "empty clause",
            });
        }
        if c.is_tautology() {
            return Err(Error::Precondition {
                clause: k + 1,
                reason: "tautological clause",
            });
        }
    }
    Ok(())
}

pub fn symmetry_test(f: &CnfFormula, backend: Backend) -> Result<SymmetryReport> {
    check_hypothesis(f)?;
    let n = f.num_vars();
    let symmetric_under: Vec<bool> = match backend {
        Backend::Atomset => {
            let s = encode_cnf(f)?;
            GeneratorIndex::all(n)
                .map(|g| s.flip_var(conjugation_action_on_atoms(g).variable) == s)
                .collect()
        }
        Backend::Multivector => {
            if n > MULTIVECTOR_BACKEND_MAX_N {
                return Err(Error::GuardExceeded {
                    n,
                    max: MULTIVECTOR_BACKEND_MAX_N,
                });
            }
            let s = encode_cnf_multivector(f)?;
            GeneratorIndex::all(n)
                .map(|g| conjugate_by_generator(&s, g).map(|c| c == s))
                .collect::<Result<_>>()?
        }
    };
    let verdict = if symmetric_under.iter().all(|&b| b) {
        Status::Unsat
    } else {
        Status::Sat
    };
    Ok(SymmetryReport {
        symmetric_under,
        verdict,
        backend,
    })
}

struct Decider {
    backend: Backend,
    invocations: u64,
}

impl Decider {
    /// Keeps every test call inside the nonempty hypothesis: an emptied
    /// clause is UNSAT outright and a clause-free residue is SAT.
    fn decide(&mut self, f: &CnfFormula) -> Result<Status> {
        if f.clauses().iter().any(|c| c.is_empty()) {
            return Ok(Status::Unsat);
        }
        if f.num_clauses() == 0 {
            return Ok(Status::Sat);
        }
        self.invocations += 1;
        Ok(symmetry_test(f, self.backend)?.verdict)
    }
}

/// Self-reduction: for `i = 1..=n`, set `rho_i := T` and keep it when the
/// reduced problem still tests SAT, otherwise set `rho_i := F`.
pub fn solve_by_reduction(f: &CnfFormula, backend: Backend) -> Result<SolveReport> {
    let start = Instant::now();
    let n = f.num_vars();
    let mut warnings = Vec::new();
    let base = f.without_tautologies();
    let dropped = f.num_clauses() - base.num_clauses();
    if dropped > 0 {
        warnings.push(format!("{dropped} tautological clause(s) treated as I"));
    }
    let mut counters = Counters {
        clauses: f.num_clauses() as u64,
        ..Counters::default()
    };
    let mut decider = Decider {
        backend,
        invocations: 0,
    };

    if base.num_clauses() == 0 {
        return Ok(SolveReport {
            status: Status::Sat,
            witness: Some(AtomId::new(n, 0)?),
            method: "symmetry",
            counters,
            wall_time: start.elapsed(),
            warnings,
        });
    }

    if decider.decide(&base)? == Status::Unsat {
        counters.test_invocations = decider.invocations;
        return Ok(SolveReport {
            status: Status::Unsat,
            witness: None,
            method: "symmetry",
            counters,
            wall_time: start.elapsed(),
            warnings,
        });
    }

    let mut current = base;
    let mut bits = 0u64;
    for i in 1..=n {
        counters.test_rounds += 1;
        let trial = current.assign(i, true);
        if decider.decide(&trial)? == Status::Sat {
            bits |= 1 << (i - 1);
            current = trial;
        } else {
            current = current.assign(i, false);
        }
    }
    counters.test_invocations = decider.invocations;

    let witness = AtomId::new(n, bits)?;
    assert!(
        f.is_satisfied_by(&witness),
        "self-reduction produced a non-satisfying assignment {witness}"
    );
    Ok(SolveReport {
        status: Status::Sat,
        witness: Some(witness),
        method: "symmetry",
        counters,
        wall_time: start.elapsed(),
        warnings,
    })
}
