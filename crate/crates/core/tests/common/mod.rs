//! Brute-force reference implementations shared by the integration tests. Nothing here
//! calls into the encoder, the solver or the oracle module.

#![allow(dead_code)]

use std::collections::BTreeMap;

use seqsat_core::{Dataset, GapTable, Lit};

#[derive(Debug, Clone, Default)]
pub struct Constraints<'a> {
    pub max_gap: Option<usize>,
    pub dep_gap: Option<&'a GapTable>,
    pub max_span: Option<usize>,
    /// Keep only patterns containing these two tokens in this order.
    pub ordered_pair: Option<(u32, u32)>,
}

/// Tries every increasing position list (0-based) of `transaction` matching `pattern`.
pub fn brute_embeds(pattern: &[u32], transaction: &[u32], cons: &Constraints) -> bool {
    fn go(pattern: &[u32], tx: &[u32], cons: &Constraints, chosen: &mut Vec<usize>) -> bool {
        let idx = chosen.len();
        if idx == pattern.len() {
            let span_ok = cons.max_span.is_none_or(|s| chosen[idx - 1] - chosen[0] <= s);
            let gaps_ok = (1..idx).all(|i| {
                let d = chosen[i] - chosen[i - 1];
                let fixed = cons.max_gap.is_none_or(|g| d <= g);
                let dep = cons.dep_gap.and_then(|t| t.get(i, pattern[i - 1])).is_none_or(|g| d <= g);
                fixed && dep
            });
            return span_ok && gaps_ok;
        }
        let from = chosen.last().map_or(0, |&p| p + 1);
        for p in from..tx.len() {
            if tx[p] == pattern[idx] {
                chosen.push(p);
                if go(pattern, tx, cons, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    !pattern.is_empty() && go(pattern, transaction, cons, &mut Vec::new())
}

pub fn is_subsequence(short: &[u32], long: &[u32]) -> bool {
    let mut it = long.iter();
    short.iter().all(|c| it.any(|x| x == c))
}

/// Every string over the vocabulary of length `1..=k` with at least `minsup` covering
/// transactions, mapped to its 1-based cover.
pub fn exhaustive_frequent(
    dataset: &Dataset,
    minsup: usize,
    k: usize,
    cons: &Constraints,
) -> BTreeMap<Vec<u32>, Vec<usize>> {
    let v = dataset.vocab_size() as u32;
    let mut out = BTreeMap::new();
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for prefix in &layer {
            for c in 0..v {
                let mut p = prefix.clone();
                p.push(c);
                next.push(p);
            }
        }
        for p in &next {
            let cover: Vec<usize> = dataset
                .transactions()
                .iter()
                .enumerate()
                .filter(|(_, t)| brute_embeds(p, t, cons))
                .map(|(i, _)| i + 1)
                .collect();
            let regex_ok = cons.ordered_pair.is_none_or(|(a, b)| is_subsequence(&[a, b], p));
            if cover.len() >= minsup && regex_ok {
                out.insert(p.clone(), cover);
            }
        }
        layer = next;
    }
    out
}

pub fn closed_of(all: &BTreeMap<Vec<u32>, Vec<usize>>) -> BTreeMap<Vec<u32>, usize> {
    all.iter()
        .filter(|(p, cov)| !all.iter().any(|(q, qc)| q.len() > p.len() && qc == *cov && is_subsequence(p, q)))
        .map(|(p, c)| (p.clone(), c.len()))
        .collect()
}

pub fn maximal_of(all: &BTreeMap<Vec<u32>, Vec<usize>>) -> BTreeMap<Vec<u32>, usize> {
    all.iter()
        .filter(|(p, _)| !all.keys().any(|q| q.len() > p.len() && is_subsequence(p, q)))
        .map(|(p, c)| (p.clone(), c.len()))
        .collect()
}

pub fn supports(all: &BTreeMap<Vec<u32>, Vec<usize>>) -> BTreeMap<Vec<u32>, usize> {
    all.iter().map(|(p, c)| (p.clone(), c.len())).collect()
}

/// Satisfiability by trying all `2^vars` assignments.
pub fn truth_table_sat(vars: u32, clauses: &[Vec<Lit>]) -> bool {
    (0u64..1 << vars).any(|bits| {
        let model: Vec<bool> = (0..vars).map(|v| bits >> v & 1 == 1).collect();
        clauses.iter().all(|c| c.iter().any(|l| l.eval(&model)))
    })
}

/// Dataset over single-letter tokens `A`, `B`, ... from index rows.
pub fn letters(rows: &[Vec<u8>]) -> Dataset {
    Dataset::from_token_sequences(
        rows.iter().map(|r| r.iter().map(|&c| char::from(b'A' + c).to_string()).collect::<Vec<_>>()),
    )
    .expect("rows are nonempty")
}
