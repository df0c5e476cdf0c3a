//! Fixed, seeded inputs shared by the benchmarks.

use nosol_core::{make_symmetric, Equation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` distinct values below `range`, sorted, from a fixed seed.
pub fn random_set(n: usize, range: i64, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = std::collections::BTreeSet::new();
    while out.len() < n {
        out.insert(rng.gen_range(0..range));
    }
    out.into_iter().collect()
}

pub fn sym(gens: &[i64]) -> Equation {
    make_symmetric(gens).expect("valid generators")
}
