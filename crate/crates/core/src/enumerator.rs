//! Pattern enumeration on top of the SAT encoding.
//!
//! * `all`: solve, decode, block exactly that pattern, repeat until UNSAT.
//! * `closed` / `maximal` on the base model: nested assumption stacks over the cardinality
//!   literals (closed only) and the padding literals, blocking every subsequence of each
//!   pattern found.
//! * `closed` / `maximal` with gap, span or regex constraints: `all` followed by a
//!   set-theoretic post-filter, since constrained covers are not anti-monotone under
//!   subsequence.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::cnf::{Lit, Pattern, DEFAULT_SUBSEQUENCE_CAP};
use crate::dataset::{Dataset, MiningConfig, Mode};
use crate::encoder::{encode, Encoding};
use crate::error::Result;
use crate::solver::{SatBackend, SolveResult, Solver, SolverConfig};

#[derive(Debug, Clone, Copy)]
pub struct MinerOptions {
    pub solver: SolverConfig,
    /// Record one embedding per covered transaction.
    pub witnesses: bool,
    /// Cap on `2^|S|` for subsequence blocking.
    pub subsequence_cap: u64,
}

impl Default for MinerOptions {
    fn default() -> Self {
        MinerOptions { solver: SolverConfig::default(), witnesses: false, subsequence_cap: DEFAULT_SUBSEQUENCE_CAP }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MiningStats {
    pub solver_calls: u64,
    pub conflicts: u64,
    pub variables: u64,
    pub clauses: u64,
    pub encode_secs: f64,
    pub solve_secs: f64,
    pub total_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternSet {
    pub patterns: Vec<Pattern>,
    pub mode: Mode,
    pub config: MiningConfig,
    pub k: usize,
    pub stats: MiningStats,
}

impl PatternSet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Pattern to support, ordered by pattern.
    pub fn supports(&self) -> BTreeMap<Vec<u32>, usize> {
        self.patterns.iter().map(|p| (p.chars.clone(), p.support)).collect()
    }

    pub fn contains(&self, chars: &[u32]) -> bool {
        self.patterns.iter().any(|p| p.chars == chars)
    }

    pub fn get(&self, chars: &[u32]) -> Option<&Pattern> {
        self.patterns.iter().find(|p| p.chars == chars)
    }
}

/// Mines according to `config.mode` with the built-in solver.
pub fn mine(dataset: &Dataset, config: &MiningConfig) -> Result<PatternSet> {
    mine_with(dataset, config, MinerOptions::default())
}

pub fn mine_with(dataset: &Dataset, config: &MiningConfig, options: MinerOptions) -> Result<PatternSet> {
    let backend = Solver::new(options.solver);
    mine_with_backend(dataset, config, options, backend)
}

pub fn mine_all(dataset: &Dataset, config: &MiningConfig) -> Result<PatternSet> {
    mine(dataset, &config.clone().with_mode(Mode::All))
}

pub fn mine_closed(dataset: &Dataset, config: &MiningConfig) -> Result<PatternSet> {
    mine(dataset, &config.clone().with_mode(Mode::Closed))
}

pub fn mine_maximal(dataset: &Dataset, config: &MiningConfig) -> Result<PatternSet> {
    mine(dataset, &config.clone().with_mode(Mode::Maximal))
}

/// Mines with any [`SatBackend`], e.g. an external DIMACS solver.
pub fn mine_with_backend<B: SatBackend>(
    dataset: &Dataset,
    config: &MiningConfig,
    options: MinerOptions,
    backend: B,
) -> Result<PatternSet> {
    let started = Instant::now();
    let encoding = encode(dataset, config)?;
    let encode_secs = started.elapsed().as_secs_f64();
    let mut miner = Miner::new(dataset, encoding, options, backend);

    let patterns = match config.mode {
        Mode::All => miner.enumerate_all()?,
        Mode::Closed | Mode::Maximal if config.has_constraints() => {
            let all = miner.enumerate_all()?;
            post_filter(all, config.mode)
        }
        Mode::Closed => miner.enumerate_stacked(config.minsup, true)?,
        Mode::Maximal => miner.enumerate_stacked(config.minsup, false)?,
    };

    let backend_stats = miner.backend.stats();
    let stats = MiningStats {
        solver_calls: miner.calls,
        conflicts: backend_stats.conflicts,
        variables: miner.encoding.varmap.total_vars() as u64,
        clauses: miner.encoding.cnf.len() as u64,
        encode_secs,
        solve_secs: miner.solve_secs,
        total_secs: started.elapsed().as_secs_f64(),
    };
    Ok(PatternSet { patterns, mode: config.mode, config: config.clone(), k: miner.encoding.k, stats })
}

struct Miner<'a, B> {
    dataset: &'a Dataset,
    encoding: Encoding,
    options: MinerOptions,
    backend: B,
    calls: u64,
    solve_secs: f64,
}

impl<'a, B: SatBackend> Miner<'a, B> {
    fn new(dataset: &'a Dataset, encoding: Encoding, options: MinerOptions, mut backend: B) -> Self {
        backend.add_cnf(&encoding.cnf);
        Miner { dataset, encoding, options, backend, calls: 0, solve_secs: 0.0 }
    }

    fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        let started = Instant::now();
        self.calls += 1;
        let result = self.backend.solve(assumptions);
        self.solve_secs += started.elapsed().as_secs_f64();
        result
    }

    /// Decodes `model`, then searches for the largest cardinality floor that is still
    /// satisfiable with the pattern pinned (galloping, then bisection), so that the reported
    /// cover is the full cover under the active constraints.
    fn complete(&mut self, model: Vec<bool>) -> Result<Pattern> {
        let varmap = &self.encoding.varmap;
        let mut best = varmap.decode_pattern(&model, false)?;
        let mut best_model = model;
        let pin = varmap.pattern_literals(&best.chars);
        let n = self.dataset.len();
        // Smallest floor known to be unsatisfiable.
        let mut ceiling = n + 1;
        let mut step = 1;
        while best.support + 1 < ceiling {
            let probe = (best.support + step).min(ceiling - 1);
            let mut assumptions = pin.clone();
            assumptions.push(self.encoding.varmap.card(probe).pos());
            match self.solve(&assumptions) {
                SolveResult::Sat(m) => {
                    let next = self.encoding.varmap.decode_pattern(&m, false)?;
                    debug_assert_eq!(next.chars, best.chars);
                    debug_assert!(next.support >= probe);
                    best = next;
                    best_model = m;
                    step *= 2;
                }
                SolveResult::Unsat(_) => {
                    ceiling = probe;
                    step = ((probe - best.support) / 2).max(1);
                }
            }
        }
        if self.options.witnesses {
            best = self.encoding.varmap.decode_pattern(&best_model, true)?;
        }
        Ok(best)
    }

    fn enumerate_all(&mut self) -> Result<Vec<Pattern>> {
        let mut patterns = Vec::new();
        while let SolveResult::Sat(model) = self.solve(&[]) {
            let pattern = self.complete(model)?;
            let block = self.encoding.varmap.blocking_clause_exact(&pattern.chars);
            patterns.push(pattern);
            if !self.backend.add_clause(&block) {
                break;
            }
        }
        Ok(patterns)
    }

    /// Assumption-stack enumeration. With `relax_cover`, the cover floor `tau` descends from
    /// `|T|` to `minsup`, one support level at a time; the floor is asserted as `card(tau)`,
    /// which implies every lower floor. Levels at which no unblocked pattern reaches `tau`
    /// would emit nothing and are skipped by searching for the next satisfiable floor.
    /// The inner stack holds `!m(1, eps) .. !m(K, eps)` and is popped from the top, lowering
    /// the length floor from `K` to 1.
    fn enumerate_stacked(&mut self, minsup: usize, relax_cover: bool) -> Result<Vec<Pattern>> {
        let mut patterns = Vec::new();
        if !relax_cover {
            self.enumerate_lengths(None, &mut patterns)?;
            return Ok(patterns);
        }
        let mut upper = self.dataset.len();
        while upper >= minsup {
            let Some(tau) = self.next_floor(minsup, upper)? else { break };
            let floor = (tau > minsup).then(|| self.encoding.varmap.card(tau).pos());
            self.enumerate_lengths(floor, &mut patterns)?;
            upper = tau - 1;
        }
        Ok(patterns)
    }

    fn enumerate_lengths(&mut self, floor: Option<Lit>, patterns: &mut Vec<Pattern>) -> Result<()> {
        let k_max = self.encoding.k;
        let mut length_stack: Vec<Lit> = (1..=k_max).map(|k| self.encoding.varmap.m_eps(k).neg()).collect();
        while !length_stack.is_empty() {
            let assumptions: Vec<Lit> = floor.iter().chain(&length_stack).copied().collect();
            while let SolveResult::Sat(model) = self.solve(&assumptions) {
                let pattern = self.complete(model)?;
                let blocks =
                    self.encoding.varmap.blocking_clauses_subsequences(&pattern.chars, self.options.subsequence_cap)?;
                patterns.push(pattern);
                for block in &blocks {
                    self.backend.add_clause(block);
                }
            }
            length_stack.pop();
        }
        Ok(())
    }

    /// Largest `tau` in `minsup..=upper` such that some unblocked pattern has support at
    /// least `tau`, or `None` if no unblocked frequent pattern remains.
    fn next_floor(&mut self, minsup: usize, upper: usize) -> Result<Option<usize>> {
        let SolveResult::Sat(model) = self.solve(&[]) else { return Ok(None) };
        let mut low = self.encoding.varmap.decode_pattern(&model, false)?.support.min(upper);
        let mut ceiling = upper + 1;
        let mut step = 1;
        while low + 1 < ceiling {
            let probe = (low + step).min(ceiling - 1);
            match self.solve(&[self.encoding.varmap.card(probe).pos()]) {
                SolveResult::Sat(m) => {
                    low = self.encoding.varmap.decode_pattern(&m, false)?.support.min(upper).max(probe);
                    step *= 2;
                }
                SolveResult::Unsat(_) => {
                    ceiling = probe;
                    step = ((probe - low) / 2).max(1);
                }
            }
        }
        debug_assert!(low >= minsup);
        Ok(Some(low))
    }
}

fn is_subsequence(short: &[u32], long: &[u32]) -> bool {
    let mut it = long.iter();
    short.iter().all(|c| it.any(|x| x == c))
}

/// Keeps the patterns with no strict supersequence of equal cover (`Closed`) or no strict
/// supersequence at all (`Maximal`) among `patterns`.
fn post_filter(patterns: Vec<Pattern>, mode: Mode) -> Vec<Pattern> {
    let dominated = |p: &Pattern| {
        patterns.iter().any(|q| {
            q.chars.len() > p.chars.len()
                && (mode == Mode::Maximal || q.cover == p.cover)
                && is_subsequence(&p.chars, &q.chars)
        })
    };
    let keep: Vec<bool> = patterns.iter().map(|p| !dominated(p)).collect();
    patterns.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn set(d: &Dataset, ps: &PatternSet) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> =
            ps.patterns.iter().map(|p| (d.display_pattern(&p.chars), p.support)).collect();
        out.sort();
        out
    }

    fn expect(pairs: &[(&str, usize)]) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = pairs.iter().map(|(s, n)| (s.to_string(), *n)).collect();
        out.sort();
        out
    }

    #[test]
    fn single_transaction_all() {
        let d = Dataset::from_chars(&["AB"]).unwrap();
        let ps = mine_all(&d, &MiningConfig::new(1, Mode::All)).unwrap();
        assert_eq!(set(&d, &ps), expect(&[("A", 1), ("B", 1), ("A B", 1)]));
    }

    #[test]
    fn impossible_threshold_is_empty() {
        let d = Dataset::from_chars(&["AB", "CD"]).unwrap();
        for mode in [Mode::All, Mode::Closed, Mode::Maximal] {
            assert!(mine(&d, &MiningConfig::new(2, mode)).unwrap().is_empty());
        }
    }

    #[test]
    fn closed_examples() {
        let d = Dataset::from_chars(&["AB", "AB"]).unwrap();
        let ps = mine_closed(&d, &MiningConfig::new(2, Mode::Closed)).unwrap();
        assert_eq!(set(&d, &ps), expect(&[("A B", 2)]));

        let d = Dataset::from_chars(&["AB", "AC"]).unwrap();
        let ps = mine_closed(&d, &MiningConfig::new(1, Mode::Closed)).unwrap();
        assert_eq!(set(&d, &ps), expect(&[("A", 2), ("A B", 1), ("A C", 1)]));
    }

    #[test]
    fn maximal_examples() {
        let d = Dataset::from_chars(&["AB", "AB"]).unwrap();
        assert_eq!(set(&d, &mine_maximal(&d, &MiningConfig::new(2, Mode::Maximal)).unwrap()), expect(&[("A B", 2)]));
        let d = Dataset::from_chars(&["AB", "AC"]).unwrap();
        assert_eq!(set(&d, &mine_maximal(&d, &MiningConfig::new(2, Mode::Maximal)).unwrap()), expect(&[("A", 2)]));
        assert_eq!(
            set(&d, &mine_maximal(&d, &MiningConfig::new(1, Mode::Maximal)).unwrap()),
            expect(&[("A B", 1), ("A C", 1)])
        );
    }

    #[test]
    fn witnesses_are_embeddings() {
        let d = Dataset::from_chars(&["BACB", "ACCB"]).unwrap();
        let options = MinerOptions { witnesses: true, ..MinerOptions::default() };
        let ps = mine_with(&d, &MiningConfig::new(2, Mode::All), options).unwrap();
        for p in &ps.patterns {
            let w = p.witness.as_ref().unwrap();
            assert_eq!(w.len(), p.support);
            for e in w {
                let tx = &d.transactions()[e.transaction - 1];
                assert!(e.positions.windows(2).all(|x| x[0] < x[1]));
                let read: Vec<u32> = e.positions.iter().map(|&j| tx[j - 1]).collect();
                assert_eq!(read, p.chars);
            }
        }
    }

    #[test]
    fn subsequence_cap_surfaces() {
        let d = Dataset::from_chars(&["ABCDE", "ABCDE"]).unwrap();
        let options = MinerOptions { subsequence_cap: 8, ..MinerOptions::default() };
        let err = mine_with(&d, &MiningConfig::new(2, Mode::Closed), options).unwrap_err();
        assert!(matches!(err, Error::SubsequenceBlowup { length: 5, .. }));
    }

    #[test]
    fn post_filter_by_cover() {
        let p = |chars: &[u32], cover: &[usize]| Pattern {
            chars: chars.to_vec(),
            support: cover.len(),
            cover: cover.to_vec(),
            witness: None,
        };
        let all = vec![p(&[0], &[1, 2]), p(&[0, 1], &[1]), p(&[1], &[1])];
        let closed: Vec<Vec<u32>> = post_filter(all.clone(), Mode::Closed).into_iter().map(|p| p.chars).collect();
        assert_eq!(closed, vec![vec![0], vec![0, 1]]);
        let maximal: Vec<Vec<u32>> = post_filter(all, Mode::Maximal).into_iter().map(|p| p.chars).collect();
        assert_eq!(maximal, vec![vec![0, 1]]);
    }
}
