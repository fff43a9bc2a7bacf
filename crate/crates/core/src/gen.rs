//! Seeded random k-SAT instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dimacs::DimacsDocument;
use crate::{Error, Result};

/// `m` clauses, each over `k` distinct variables drawn uniformly from
/// `1..=n` with independent uniform signs. Same seed, same document.
pub fn gen_random_ksat(n: u32, m: usize, k: u32, seed: u64) -> Result<DimacsDocument> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!(
            "clause width k = {k} must satisfy 1 <= k <= n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<usize> = sample(&mut rng, n as usize, k as usize).into_vec();
            vars.sort_unstable();
            vars.into_iter()
                .map(|v| {
                    let lit = v as i64 + 1;
                    if rng.random_bool(0.5) {
                        -lit
                    } else {
                        lit
                    }
                })
                .collect()
        })
        .collect();
    let mut doc = DimacsDocument::new(n, clauses);
    doc.comments
        .push(format!("random {k}-SAT n={n} m={m} seed={seed}"));
    Ok(doc)
}
