//! Benchmark fixtures shared by the criterion targets in `benches/`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqsat_core::synth;
use seqsat_core::{Cnf, Dataset, Lit};

/// The random corpus instance used by the mining benchmarks.
pub fn random_instance(seed: u64) -> Dataset {
    synth::random_dataset(seed, (20, 30), (3, 5), (6, 12))
}

/// Text-like corpus shaped like a small abstract collection.
pub fn text_instance(seed: u64, transactions: usize) -> Dataset {
    synth::text_corpus(seed, transactions, 40, (4, 12))
}

/// Uniform random 3-CNF.
pub fn random_3sat(vars: u32, clauses: usize, seed: u64) -> Cnf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cnf = Cnf::new(vars);
    for _ in 0..clauses {
        let clause: Vec<Lit> = (0..3)
            .map(|_| {
                let v = rng.gen_range(1..=vars as i64);
                Lit::from_dimacs(if rng.gen_bool(0.5) { v } else { -v }).unwrap()
            })
            .collect();
        cnf.add_clause(clause);
    }
    cnf
}
