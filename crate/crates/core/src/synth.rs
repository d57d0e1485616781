//! Seeded dataset generators for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;

/// Uniform random dataset over tokens `A`, `B`, ... with the given size ranges (inclusive).
pub fn random_dataset(
    seed: u64,
    transactions: (usize, usize),
    vocab: (usize, usize),
    length: (usize, usize),
) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(transactions.0..=transactions.1);
    let v = rng.gen_range(vocab.0..=vocab.1);
    let alphabet: Vec<String> = (0..v).map(|c| char::from(b'A' + c as u8).to_string()).collect();
    let rows: Vec<Vec<String>> = (0..n)
        .map(|_| {
            let len = rng.gen_range(length.0..=length.1);
            (0..len).map(|_| alphabet[rng.gen_range(0..v)].clone()).collect()
        })
        .collect();
    Dataset::from_token_sequences(rows).expect("generated rows are nonempty")
}

/// Text-like corpus: Zipf-distributed word frequencies with sticky bigrams, so that some
/// word pairs tend to occur close together.
pub fn text_corpus(seed: u64, transactions: usize, vocab: usize, length: (usize, usize)) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (1..=vocab).map(|r| 1.0 / r as f64).collect();
    let total: f64 = weights.iter().sum();
    let draw = |rng: &mut ChaCha8Rng| {
        let mut x = rng.gen::<f64>() * total;
        for (i, w) in weights.iter().enumerate() {
            if x < *w {
                return i;
            }
            x -= w;
        }
        vocab - 1
    };
    let follower: Vec<usize> = (0..vocab).map(|_| draw(&mut rng)).collect();
    let rows: Vec<Vec<String>> = (0..transactions)
        .map(|_| {
            let len = rng.gen_range(length.0..=length.1);
            let mut row = Vec::with_capacity(len);
            let mut prev = draw(&mut rng);
            row.push(prev);
            while row.len() < len {
                prev = if rng.gen_bool(0.3) { follower[prev] } else { draw(&mut rng) };
                row.push(prev);
            }
            row.into_iter().map(|w| format!("w{w}")).collect()
        })
        .collect();
    Dataset::from_token_sequences(rows).expect("generated rows are nonempty")
}
