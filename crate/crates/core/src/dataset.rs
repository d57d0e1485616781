//! Transactional sequence datasets, their text formats, and mining configuration.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tokens that collide with the padding character and may not appear in a vocabulary.
pub const RESERVED_TOKENS: [&str; 2] = ["ε", "<eps>"];

/// A vocabulary plus an ordered list of transactions over it.
///
/// Characters are stored as 0-based indices into `vocabulary`. The vocabulary is kept in
/// first-appearance order so that variable numbering is reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    vocabulary: Vec<String>,
    transactions: Vec<Vec<u32>>,
    #[serde(default)]
    name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One transaction per line, whitespace-separated tokens, `#` starts a comment.
    Tokens,
    /// SPMF integer format: `-1` closes an element, `-2` closes a transaction.
    Spmf,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tokens" => Ok(Format::Tokens),
            "spmf" => Ok(Format::Spmf),
            other => Err(Error::InvalidConfig(format!("unknown dataset format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub transaction_count: usize,
    pub vocab_size: usize,
    pub max_length: usize,
    pub avg_length: f64,
}

impl Dataset {
    pub fn new(vocabulary: Vec<String>, transactions: Vec<Vec<u32>>) -> Result<Self> {
        if transactions.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut seen = HashMap::with_capacity(vocabulary.len());
        for (idx, token) in vocabulary.iter().enumerate() {
            if RESERVED_TOKENS.contains(&token.as_str()) {
                return Err(Error::ReservedToken(token.clone()));
            }
            if seen.insert(token.as_str(), idx).is_some() {
                return Err(Error::InvalidConfig(format!("duplicate vocabulary token {token:?}")));
            }
        }
        for (i, tx) in transactions.iter().enumerate() {
            if tx.is_empty() {
                return Err(Error::MalformedLine { line: i + 1, message: "empty transaction".into() });
            }
            if let Some(&bad) = tx.iter().find(|&&c| c as usize >= vocabulary.len()) {
                return Err(Error::InvalidConfig(format!(
                    "transaction {} references character {bad} outside the vocabulary",
                    i + 1
                )));
            }
        }
        Ok(Dataset { vocabulary, transactions, name: None })
    }

    /// Builds a dataset from token sequences, assigning indices in first-appearance order.
    pub fn from_token_sequences<I, T, S>(sequences: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut interner = Interner::default();
        let mut transactions = Vec::new();
        for seq in sequences {
            let mut tx = Vec::new();
            for token in seq {
                tx.push(interner.intern(token.as_ref())?);
            }
            transactions.push(tx);
        }
        Dataset::new(interner.vocabulary, transactions)
    }

    /// Builds a dataset where every `char` of every string is one token, e.g. `["ACCBAB", "AB"]`.
    pub fn from_chars(rows: &[&str]) -> Result<Self> {
        Dataset::from_token_sequences(rows.iter().map(|row| row.chars().map(|c| c.to_string()).collect::<Vec<_>>()))
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Tokens => parse_tokens(text),
            Format::Spmf => parse_spmf(text),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let mut out = String::new();
        for tx in &self.transactions {
            match format {
                Format::Tokens => {
                    let line: Vec<&str> = tx.iter().map(|&c| self.token(c)).collect();
                    out.push_str(&line.join(" "));
                }
                Format::Spmf => {
                    for &c in tx {
                        let token = self.token(c);
                        if token.parse::<u64>().is_err() {
                            return Err(Error::InvalidConfig(format!(
                                "token {token:?} cannot be written in spmf format"
                            )));
                        }
                        out.push_str(token);
                        out.push_str(" -1 ");
                    }
                    out.push_str("-2");
                }
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn transactions(&self) -> &[Vec<u32>] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn token(&self, c: u32) -> &str {
        &self.vocabulary[c as usize]
    }

    pub fn index_of(&self, token: &str) -> Option<u32> {
        self.vocabulary.iter().position(|t| t == token).map(|i| i as u32)
    }

    /// Renders a pattern as space-separated tokens.
    pub fn display_pattern(&self, chars: &[u32]) -> String {
        chars.iter().map(|&c| self.token(c)).collect::<Vec<_>>().join(" ")
    }

    /// Parses a space-separated token string into character indices.
    pub fn parse_pattern(&self, text: &str) -> Result<Vec<u32>> {
        text.split_whitespace()
            .map(|t| self.index_of(t).ok_or_else(|| Error::TokenNotInVocabulary(t.to_string())))
            .collect()
    }

    pub fn stats(&self) -> DatasetStats {
        let total: usize = self.transactions.iter().map(Vec::len).sum();
        DatasetStats {
            transaction_count: self.transactions.len(),
            vocab_size: self.vocabulary.len(),
            max_length: self.transactions.iter().map(Vec::len).max().unwrap_or(0),
            avg_length: total as f64 / self.transactions.len() as f64,
        }
    }

    /// Upper bound on pattern length: the length of the `minsup`-th longest transaction.
    pub fn compute_k(&self, minsup: usize) -> Result<usize> {
        self.check_minsup(minsup)?;
        let mut lengths: Vec<usize> = self.transactions.iter().map(Vec::len).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Ok(lengths[minsup - 1])
    }

    pub fn check_minsup(&self, minsup: usize) -> Result<()> {
        if minsup == 0 || minsup > self.transactions.len() {
            return Err(Error::MinsupOutOfRange { minsup, transactions: self.transactions.len() });
        }
        Ok(())
    }
}

#[derive(Default)]
struct Interner {
    vocabulary: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, token: &str) -> Result<u32> {
        if RESERVED_TOKENS.contains(&token) {
            return Err(Error::ReservedToken(token.to_string()));
        }
        if let Some(&idx) = self.index.get(token) {
            return Ok(idx);
        }
        let idx = self.vocabulary.len() as u32;
        self.vocabulary.push(token.to_string());
        self.index.insert(token.to_string(), idx);
        Ok(idx)
    }
}

fn parse_tokens(text: &str) -> Result<Dataset> {
    let mut interner = Interner::default();
    let mut transactions = Vec::new();
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("");
        let mut tx = Vec::new();
        for token in content.split_whitespace() {
            tx.push(interner.intern(token)?);
        }
        if !tx.is_empty() {
            transactions.push(tx);
        }
    }
    Dataset::new(interner.vocabulary, transactions)
}

fn parse_spmf(text: &str) -> Result<Dataset> {
    let mut interner = Interner::default();
    let mut transactions = Vec::new();
    let mut tx: Vec<u32> = Vec::new();
    let mut element: Vec<&str> = Vec::new();
    let mut last_line = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim_start();
        if trimmed.starts_with('@') || trimmed.starts_with('#') {
            continue;
        }
        for word in line.split_whitespace() {
            last_line = line_no;
            let malformed = |message: &str| Error::MalformedLine { line: line_no, message: message.into() };
            let value: i64 = word.parse().map_err(|_| malformed(&format!("expected an integer, found {word:?}")))?;
            match value {
                -1 => match element.len() {
                    0 => return Err(malformed("element closed with no item")),
                    1 => tx.push(interner.intern(element.pop().unwrap())?),
                    _ => return Err(malformed("multi-item elements are not supported")),
                },
                -2 => {
                    if !element.is_empty() {
                        return Err(malformed("transaction closed inside an open element"));
                    }
                    if tx.is_empty() {
                        return Err(malformed("empty transaction"));
                    }
                    transactions.push(std::mem::take(&mut tx));
                }
                v if v >= 0 => element.push(word),
                _ => return Err(malformed(&format!("unexpected sentinel {value}"))),
            }
        }
    }
    if !tx.is_empty() || !element.is_empty() {
        return Err(Error::MalformedLine {
            line: last_line,
            message: "input ends inside a transaction (missing -2)".into(),
        });
    }
    Dataset::new(interner.vocabulary, transactions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    All,
    #[default]
    Closed,
    Maximal,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Mode::All),
            "closed" => Ok(Mode::Closed),
            "maximal" => Ok(Mode::Maximal),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::All => "all",
            Mode::Closed => "closed",
            Mode::Maximal => "maximal",
        })
    }
}

/// Per-(pattern position, character) upper bound on the distance to the next embedded
/// character. Positions are 1-based and refer to the character preceding the gap.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<GapEntry>", from = "Vec<GapEntry>")]
pub struct GapTable {
    entries: BTreeMap<(usize, u32), usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GapEntry {
    position: usize,
    token: u32,
    max_gap: usize,
}

impl From<GapTable> for Vec<GapEntry> {
    fn from(table: GapTable) -> Self {
        table.entries.into_iter().map(|((position, token), max_gap)| GapEntry { position, token, max_gap }).collect()
    }
}

impl From<Vec<GapEntry>> for GapTable {
    fn from(entries: Vec<GapEntry>) -> Self {
        GapTable { entries: entries.into_iter().map(|e| ((e.position, e.token), e.max_gap)).collect() }
    }
}

impl GapTable {
    /// Table assigning the same bound to every position in `1..=positions` and every character.
    pub fn constant(positions: usize, vocab_size: usize, max_gap: usize) -> Self {
        let mut table = GapTable::default();
        for position in 1..=positions {
            for c in 0..vocab_size as u32 {
                table.set(position, c, max_gap);
            }
        }
        table
    }

    pub fn set(&mut self, position: usize, c: u32, max_gap: usize) {
        self.entries.insert((position, c), max_gap);
    }

    pub fn get(&self, position: usize, c: u32) -> Option<usize> {
        self.entries.get(&(position, c)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses CSV rows `position,token,maxgap`. A leading non-numeric header row is skipped.
    pub fn parse_csv(text: &str, dataset: &Dataset) -> Result<Self> {
        let mut table = GapTable::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let malformed = |message: String| Error::MalformedLine { line: lineno + 1, message };
            if fields.len() != 3 {
                return Err(malformed(format!("expected 3 fields, found {}", fields.len())));
            }
            let Ok(position) = fields[0].parse::<usize>() else {
                if table.is_empty() && lineno == 0 {
                    continue;
                }
                return Err(malformed(format!("bad position {:?}", fields[0])));
            };
            let c = dataset.index_of(fields[1]).ok_or_else(|| Error::TokenNotInVocabulary(fields[1].to_string()))?;
            let max_gap: usize = fields[2].parse().map_err(|_| malformed(format!("bad gap {:?}", fields[2])))?;
            if position == 0 || max_gap == 0 {
                return Err(malformed("positions and gaps are 1-based and positive".into()));
            }
            table.set(position, c, max_gap);
        }
        Ok(table)
    }

    /// Checks that every position that can precede another (`1..k`) has an entry for every
    /// character.
    pub fn check_total(&self, k: usize, dataset: &Dataset) -> Result<()> {
        for position in 1..k {
            for c in 0..dataset.vocab_size() as u32 {
                if self.get(position, c).is_none() {
                    return Err(Error::PartialGapTable { position, token: dataset.token(c).to_string() });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiningConfig {
    /// Absolute support threshold.
    pub minsup: usize,
    pub max_gap: Option<usize>,
    pub dep_gap: Option<GapTable>,
    pub max_span: Option<usize>,
    pub regex: Option<String>,
    pub mode: Mode,
}

impl MiningConfig {
    pub fn new(minsup: usize, mode: Mode) -> Self {
        MiningConfig { minsup, max_gap: None, dep_gap: None, max_span: None, regex: None, mode }
    }

    pub fn with_max_gap(mut self, gap: usize) -> Self {
        self.max_gap = Some(gap);
        self
    }

    pub fn with_dep_gap(mut self, table: GapTable) -> Self {
        self.dep_gap = Some(table);
        self
    }

    pub fn with_max_span(mut self, span: usize) -> Self {
        self.max_span = Some(span);
        self
    }

    pub fn with_regex(mut self, regex: impl Into<String>) -> Self {
        self.regex = Some(regex.into());
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// True when some constraint restricts how a pattern may be embedded.
    pub fn has_embedding_constraints(&self) -> bool {
        self.max_gap.is_some() || self.dep_gap.is_some() || self.max_span.is_some()
    }

    pub fn has_constraints(&self) -> bool {
        self.has_embedding_constraints() || self.regex.is_some()
    }

    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        dataset.check_minsup(self.minsup)?;
        if self.max_gap == Some(0) {
            return Err(Error::InvalidConfig("max-gap must be at least 1".into()));
        }
        if self.max_span == Some(0) {
            return Err(Error::InvalidConfig("max-span must be at least 1".into()));
        }
        if let Some(table) = &self.dep_gap {
            table.check_total(dataset.compute_k(self.minsup)?, dataset)?;
        }
        Ok(())
    }
}

/// Resolves a CLI-style threshold: either an absolute count or a percentage such as `"1%"`,
/// which rounds up to the next whole transaction.
pub fn resolve_minsup(text: &str, transactions: usize) -> Result<usize> {
    let text = text.trim();
    let bad = || Error::InvalidConfig(format!("cannot parse minsup {text:?}"));
    let minsup = if let Some(pct) = text.strip_suffix('%') {
        let pct: f64 = pct.trim().parse().map_err(|_| bad())?;
        if !pct.is_finite() || pct < 0.0 {
            return Err(bad());
        }
        // Round away representation noise (e.g. 0.07 * 100) before taking the ceiling.
        let raw = pct * transactions as f64 / 100.0;
        let rounded = (raw * 1e9).round() / 1e9;
        rounded.ceil() as usize
    } else {
        text.parse().map_err(|_| bad())?
    };
    if minsup == 0 || minsup > transactions {
        return Err(Error::MinsupOutOfRange { minsup, transactions });
    }
    Ok(minsup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Dataset {
        Dataset::parse("B A C B\nA C C B", Format::Tokens).unwrap()
    }

    #[test]
    fn parses_tokens_in_first_appearance_order() {
        let d = fig1();
        assert_eq!(d.vocabulary(), ["B", "A", "C"]);
        assert_eq!(d.transactions(), [vec![0, 1, 2, 0], vec![1, 2, 2, 0]]);
    }

    #[test]
    fn minimal_input() {
        let d = Dataset::parse("A\n", Format::Tokens).unwrap();
        assert_eq!(d.vocabulary(), ["A"]);
        assert_eq!(d.transactions(), [vec![0]]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let d = Dataset::parse("# header\n\nA B # trailing\n  \nC\n", Format::Tokens).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.transactions()[0], vec![0, 1]);
    }

    #[test]
    fn spmf_single_transaction() {
        let d = Dataset::parse("1 -1 2 -1 -2", Format::Spmf).unwrap();
        assert_eq!(d.vocabulary(), ["1", "2"]);
        assert_eq!(d.transactions(), [vec![0, 1]]);
    }

    #[test]
    fn spmf_rejects_misuse() {
        for bad in ["1 2 -1 -2", "-1 -2", "1 -1", "1 -2", "-2", "1 -1 -3 -2", "x -1 -2"] {
            let err = Dataset::parse(bad, Format::Spmf).unwrap_err();
            assert!(matches!(err, Error::MalformedLine { .. }), "{bad}: {err:?}");
        }
    }

    #[test]
    fn empty_and_reserved() {
        assert!(matches!(Dataset::parse("", Format::Tokens), Err(Error::EmptyDataset)));
        assert!(matches!(Dataset::parse("# only\n", Format::Tokens), Err(Error::EmptyDataset)));
        assert!(matches!(Dataset::parse("A ε", Format::Tokens), Err(Error::ReservedToken(_))));
        assert!(matches!(Dataset::parse("<eps> A", Format::Tokens), Err(Error::ReservedToken(_))));
    }

    #[test]
    fn k_bound() {
        let d = Dataset::from_chars(&["ABCDEF", "AB"]).unwrap();
        assert_eq!(d.compute_k(2).unwrap(), 2);
        assert_eq!(d.compute_k(1).unwrap(), 6);
        let d = Dataset::from_chars(&["AAAAA", "BBBBB", "CCC"]).unwrap();
        assert_eq!(d.compute_k(2).unwrap(), 5);
        let d = Dataset::from_chars(&["AAAA", "BBB", "CC", "DD"]).unwrap();
        assert_eq!(d.compute_k(3).unwrap(), 2);
        assert!(matches!(d.compute_k(0), Err(Error::MinsupOutOfRange { .. })));
        assert!(matches!(d.compute_k(5), Err(Error::MinsupOutOfRange { .. })));
    }

    #[test]
    fn stats_by_hand() {
        let s = fig1().stats();
        assert_eq!(s, DatasetStats { transaction_count: 2, vocab_size: 3, max_length: 4, avg_length: 4.0 });
        let s = Dataset::parse("A", Format::Tokens).unwrap().stats();
        assert_eq!(s, DatasetStats { transaction_count: 1, vocab_size: 1, max_length: 1, avg_length: 1.0 });
    }

    #[test]
    fn percent_minsup_rounds_up() {
        assert_eq!(resolve_minsup("1%", 500).unwrap(), 5);
        assert_eq!(resolve_minsup("10%", 7).unwrap(), 1);
        assert_eq!(resolve_minsup("50%", 5).unwrap(), 3);
        assert_eq!(resolve_minsup("7%", 100).unwrap(), 7);
        assert_eq!(resolve_minsup("3", 5).unwrap(), 3);
        assert!(matches!(resolve_minsup("0", 5), Err(Error::MinsupOutOfRange { .. })));
        assert!(matches!(resolve_minsup("0%", 5), Err(Error::MinsupOutOfRange { .. })));
        assert!(matches!(resolve_minsup("6", 5), Err(Error::MinsupOutOfRange { .. })));
        assert!(resolve_minsup("abc", 5).is_err());
    }

    #[test]
    fn gap_table_csv() {
        let d = Dataset::from_chars(&["AB", "BA"]).unwrap();
        let t = GapTable::parse_csv("position,token,maxgap\n1,A,2\n1,B,3\n", &d).unwrap();
        assert_eq!(t.get(1, 0), Some(2));
        assert_eq!(t.get(1, 1), Some(3));
        t.check_total(2, &d).unwrap();
        let err = t.check_total(3, &d).unwrap_err();
        assert!(matches!(err, Error::PartialGapTable { position: 2, .. }));
        assert!(GapTable::parse_csv("1,Z,2", &d).is_err());
        assert!(GapTable::parse_csv("1,A,0", &d).is_err());
    }
}
