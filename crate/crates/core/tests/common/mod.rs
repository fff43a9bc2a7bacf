#![allow(dead_code)]

use clifsat::dimacs::DimacsDocument;
use clifsat::gen::gen_random_ksat;
use clifsat::sat::CnfFormula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE_DIMACS: &str = "p cnf 3 5\n1 -2 0\n2 3 0\n-1 -3 0\n-1 -2 3 0\n1 2 -3 0\n";

/// (x1 v ~x2)(x2 v x3)(~x1 v ~x3)(~x1 v ~x2 v x3)(x1 v x2 v ~x3)
pub fn example_clauses() -> Vec<Vec<i64>> {
    vec![vec![1, -2], vec![2, 3], vec![-1, -3], vec![-1, -2, 3], vec![1, 2, -3]]
}

pub fn example() -> CnfFormula {
    CnfFormula::from_dimacs(3, &example_clauses()).unwrap()
}

pub struct Instance {
    pub seed: u64,
    pub k: u32,
    pub doc: DimacsDocument,
    pub formula: CnfFormula,
}

impl Instance {
    pub fn n(&self) -> u32 {
        self.doc.num_vars
    }
}

/// The fixed sweep: instance `i` has `k = 2 + i % 2`, `n` uniform in
/// `k..=10` and `m` uniform in `1..=5n`, all drawn from seed `i`.
pub fn instance_set(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = 2 + (seed % 2) as u32;
            let n = rng.random_range(k..=10);
            let m = rng.random_range(1..=5 * n as usize);
            let doc = gen_random_ksat(n, m, k, seed).unwrap();
            let formula = doc.to_formula().unwrap();
            Instance { seed, k, doc, formula }
        })
        .collect()
}

/// Satisfying assignments as bit patterns (bit `i - 1` = variable `i`),
/// evaluated straight from the signed literal lists.
pub fn truth_table(n: u32, clauses: &[Vec<i64>]) -> Vec<u64> {
    (0..1u64 << n)
        .filter(|bits| {
            clauses.iter().all(|c| {
                c.iter().any(|&lit| {
                    let value = bits >> (lit.unsigned_abs() - 1) & 1 == 1;
                    value == (lit > 0)
                })
            })
        })
        .collect()
}
