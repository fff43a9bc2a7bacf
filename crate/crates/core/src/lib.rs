//! Exact Clifford-algebra machinery for Boolean satisfiability.
//!
//! A CNF formula over `n` variables is encoded in Cl(R^{n,n}) through the
//! Extended Fock Basis: literals become the idempotents `q_i p_i` / `p_i q_i`,
//! clauses become `I - z_j`, and the formula becomes the product
//! `S = prod_j (I - z_j)`, whose expansion is the DNF of the formula.
//!
//! The crate is organised in layers:
//!
//! * [`efb`] exact sparse multivectors over the Extended Fock Basis, with a
//!   dense matrix oracle in [`oracle`] for small `n`;
//! * [`lattice`] the Boolean algebra of idempotents, backed by bitsets;
//! * [`sat`] CNF types, clause encoding and DNF expansion;
//! * [`symmetry`] the generator-conjugation unsatisfiability test and the
//!   self-reduction solver built on it;
//! * [`null_geometry`] atoms, maximal totally null subspaces and `O(1)^n`;
//! * [`orthogonal`] the continuous `O(n)` layer (subspace forms, classes,
//!   samplers and the experimental cover search);
//! * [`dimacs`], [`witness`], [`report`] and [`run`] for I/O and dispatch.

pub mod bench;
pub mod dimacs;
pub mod efb;
pub mod error;
pub mod gen;
pub mod lattice;
pub mod null_geometry;
pub mod oracle;
pub mod orthogonal;
pub mod report;
pub mod run;
pub mod sat;
pub mod symmetry;
pub mod witness;

pub use error::{Error, Result};

/// Default upper bound on `n` for anything that allocates `2^n` storage.
pub const DEFAULT_MAX_N: u32 = 24;

/// Absolute ceiling regardless of configuration; atom indices are `u64` and
/// bitsets are addressed with `usize`.
pub const HARD_MAX_N: u32 = 32;

/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "CLIFSAT_MAX_N";

/// The configured guard: `CLIFSAT_MAX_N` if set and parseable, else
/// [`DEFAULT_MAX_N`]; never above [`HARD_MAX_N`].
pub fn configured_max_n() -> u32 {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .unwrap_or(DEFAULT_MAX_N)
        .min(HARD_MAX_N)
}

pub(crate) fn check_guard(n: u32) -> Result<()> {
    let max = configured_max_n();
    if n > max {
        return Err(Error::GuardExceeded { n, max });
    }
    Ok(())
}
