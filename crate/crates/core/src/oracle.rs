//! Brute-force reference miner.
//!
//! Shares no code with the encoder or solver: embeddings are decided by a direct
//! reachability scan, the regex filter has its own matcher, and closed/maximal sets are
//! computed by pairwise comparison over the full frequent set.

use std::collections::BTreeSet;

use crate::cnf::Pattern;
use crate::dataset::{Dataset, GapTable, MiningConfig, Mode};
use crate::enumerator::{MiningStats, PatternSet};
use crate::error::{Error, Result};

/// Default node budget for [`oracle_mine`].
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Constraints on how a pattern may be embedded. Gaps and spans are position differences.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmbeddingQuery<'a> {
    pub max_gap: Option<usize>,
    pub dep_gap: Option<&'a GapTable>,
    pub max_span: Option<usize>,
}

impl<'a> EmbeddingQuery<'a> {
    pub fn from_config(config: &'a MiningConfig) -> Self {
        EmbeddingQuery { max_gap: config.max_gap, dep_gap: config.dep_gap.as_ref(), max_span: config.max_span }
    }

    /// Largest allowed distance from pattern position `pos` (1-based) holding `c` to the next.
    fn gap_after(&self, pos: usize, c: u32) -> usize {
        let mut limit = self.max_gap.unwrap_or(usize::MAX);
        if let Some(table) = self.dep_gap {
            limit = limit.min(table.get(pos, c).unwrap_or(usize::MAX));
        }
        limit
    }
}

/// True iff `pattern` has at least one embedding in `transaction` satisfying every
/// active constraint.
pub fn embeds(pattern: &[u32], transaction: &[u32], query: &EmbeddingQuery) -> bool {
    if pattern.is_empty() {
        return true;
    }
    let len = transaction.len();
    for start in 0..len {
        if transaction[start] != pattern[0] {
            continue;
        }
        let horizon = query.max_span.map_or(len - 1, |s| (start + s).min(len - 1));
        let mut reach = vec![false; len];
        reach[start] = true;
        let mut alive = true;
        for (idx, &c) in pattern.iter().enumerate().skip(1) {
            let limit = query.gap_after(idx, pattern[idx - 1]);
            let mut next = vec![false; len];
            let mut any = false;
            for q in start + 1..=horizon {
                if transaction[q] != c {
                    continue;
                }
                let lo = q.saturating_sub(limit);
                if (lo..q).any(|p| reach[p]) {
                    next[q] = true;
                    any = true;
                }
            }
            if !any {
                alive = false;
                break;
            }
            reach = next;
        }
        if alive {
            return true;
        }
    }
    false
}

/// 1-based ids of the transactions in which `pattern` embeds under `query`.
pub fn cover(pattern: &[u32], dataset: &Dataset, query: &EmbeddingQuery) -> Vec<usize> {
    dataset.transactions().iter().enumerate().filter(|(_, tx)| embeds(pattern, tx, query)).map(|(i, _)| i + 1).collect()
}

pub fn oracle_mine(dataset: &Dataset, config: &MiningConfig) -> Result<PatternSet> {
    oracle_mine_with_budget(dataset, config, DEFAULT_BUDGET)
}

/// Depth-first right extension with prefix pruning, capped at the pattern bound; then the
/// regex filter, then the closed/maximal filter.
pub fn oracle_mine_with_budget(dataset: &Dataset, config: &MiningConfig, budget: u64) -> Result<PatternSet> {
    config.validate(dataset)?;
    let k = dataset.compute_k(config.minsup)?;
    let query = EmbeddingQuery::from_config(config);
    let matcher = config.regex.as_deref().map(|r| Matcher::parse(r, dataset)).transpose()?;

    let mut frequent = Vec::new();
    let mut nodes = 0u64;
    let all_ids: Vec<usize> = (1..=dataset.len()).collect();
    let mut stack: Vec<(Vec<u32>, Vec<usize>)> = vec![(Vec::new(), all_ids)];
    while let Some((prefix, candidates)) = stack.pop() {
        if prefix.len() == k {
            continue;
        }
        for c in (0..dataset.vocab_size() as u32).rev() {
            nodes += 1;
            if nodes > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let mut pattern = prefix.clone();
            pattern.push(c);
            let covered: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&i| embeds(&pattern, &dataset.transactions()[i - 1], &query))
                .collect();
            if covered.len() >= config.minsup {
                frequent.push(Pattern {
                    chars: pattern.clone(),
                    support: covered.len(),
                    cover: covered.clone(),
                    witness: None,
                });
                stack.push((pattern, covered));
            }
        }
    }

    if let Some(m) = &matcher {
        frequent.retain(|p| m.matches(&p.chars));
    }
    let patterns = match config.mode {
        Mode::All => frequent,
        Mode::Closed | Mode::Maximal => {
            let mut kept = Vec::new();
            for p in &frequent {
                let beaten = frequent.iter().any(|q| {
                    q.chars.len() > p.chars.len()
                        && contains_subsequence(&q.chars, &p.chars)
                        && (config.mode == Mode::Maximal || q.cover == p.cover)
                });
                if !beaten {
                    kept.push(p.clone());
                }
            }
            kept
        }
    };
    Ok(PatternSet { patterns, mode: config.mode, config: config.clone(), k, stats: MiningStats::default() })
}

fn contains_subsequence(long: &[u32], short: &[u32]) -> bool {
    let mut pos = 0;
    for &c in long {
        if pos < short.len() && short[pos] == c {
            pos += 1;
        }
    }
    pos == short.len()
}

#[derive(Debug, Clone)]
enum Node {
    Token(u32),
    Any,
    Anything,
    Seq(Vec<Node>),
    Alt(Vec<Node>),
}

/// Regex matcher over token sequences that tracks the set of reachable end offsets.
#[derive(Debug, Clone)]
pub struct Matcher {
    root: Node,
}

impl Matcher {
    pub fn parse(pattern: &str, dataset: &Dataset) -> Result<Matcher> {
        let mut words: Vec<Word> = Vec::new();
        for word in pattern.split_whitespace() {
            if dataset.index_of(word).is_some() {
                words.push(Word::Literal(word.to_string()));
                continue;
            }
            let mut current = String::new();
            for ch in word.chars() {
                if "()|*⋆.".contains(ch) {
                    if !current.is_empty() {
                        words.push(Word::Literal(std::mem::take(&mut current)));
                    }
                    words.push(Word::Op(if ch == '⋆' { '*' } else { ch }));
                } else {
                    current.push(ch);
                }
            }
            if !current.is_empty() {
                words.push(Word::Literal(current));
            }
        }
        let mut pos = 0;
        let root = parse_alt(&words, &mut pos, dataset)?;
        if pos != words.len() {
            return Err(Error::RegexSyntax { position: pos, message: "trailing input".into() });
        }
        Ok(Matcher { root })
    }

    pub fn matches(&self, chars: &[u32]) -> bool {
        ends(&self.root, chars, &BTreeSet::from([0])).contains(&chars.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Word {
    Literal(String),
    Op(char),
}

fn parse_alt(words: &[Word], pos: &mut usize, dataset: &Dataset) -> Result<Node> {
    let mut branches = vec![parse_seq(words, pos, dataset)?];
    while words.get(*pos) == Some(&Word::Op('|')) {
        *pos += 1;
        branches.push(parse_seq(words, pos, dataset)?);
    }
    Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Node::Alt(branches) })
}

fn parse_seq(words: &[Word], pos: &mut usize, dataset: &Dataset) -> Result<Node> {
    let mut items = Vec::new();
    while let Some(word) = words.get(*pos) {
        match word {
            Word::Op('|') | Word::Op(')') => break,
            Word::Op('(') => {
                *pos += 1;
                let inner = parse_alt(words, pos, dataset)?;
                if words.get(*pos) != Some(&Word::Op(')')) {
                    return Err(Error::RegexSyntax { position: *pos, message: "missing ')'".into() });
                }
                *pos += 1;
                items.push(inner);
            }
            Word::Op('*') => {
                *pos += 1;
                items.push(Node::Anything);
            }
            Word::Op(_) => {
                *pos += 1;
                items.push(Node::Any);
            }
            Word::Literal(token) => {
                let c = dataset.index_of(token).ok_or_else(|| Error::TokenNotInVocabulary(token.clone()))?;
                *pos += 1;
                items.push(Node::Token(c));
            }
        }
    }
    Ok(Node::Seq(items))
}

fn ends(node: &Node, chars: &[u32], starts: &BTreeSet<usize>) -> BTreeSet<usize> {
    match node {
        Node::Token(c) => starts.iter().filter(|&&p| p < chars.len() && chars[p] == *c).map(|p| p + 1).collect(),
        Node::Any => starts.iter().filter(|&&p| p < chars.len()).map(|p| p + 1).collect(),
        Node::Anything => match starts.iter().next() {
            Some(&first) => (first..=chars.len()).collect(),
            None => BTreeSet::new(),
        },
        Node::Seq(items) => items.iter().fold(starts.clone(), |acc, item| ends(item, chars, &acc)),
        Node::Alt(branches) => branches.iter().flat_map(|b| ends(b, chars, starts)).collect(),
    }
}
