//! Literals, clause databases, the semantic variable map and model decoding.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Not;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Default upper bound on `2^|S|` when blocking every subsequence of a pattern.
pub const DEFAULT_SUBSEQUENCE_CAP: u64 = 1 << 20;

/// A propositional variable, 0-based. DIMACS id is `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn pos(self) -> Lit {
        Lit(self.0 << 1)
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit((self.0 << 1) | 1)
    }

    #[inline]
    pub fn lit(self, positive: bool) -> Lit {
        if positive {
            self.pos()
        } else {
            self.neg()
        }
    }

    pub fn dimacs(self) -> i64 {
        self.0 as i64 + 1
    }
}

/// A literal encoded as `var << 1 | negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// Truth value of this literal under a total assignment indexed by variable.
    #[inline]
    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var().index()] ^ self.is_negated()
    }

    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 || value.unsigned_abs() > u32::MAX as u64 / 2 {
            return None;
        }
        let var = Var((value.unsigned_abs() - 1) as u32);
        Some(var.lit(value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().dimacs();
        if self.is_negated() {
            -v
        } else {
            v
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = Vec<Lit>;

/// A clause database over variables `0..var_count`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    clauses: Vec<Clause>,
    var_count: u32,
}

impl Cnf {
    pub fn new(var_count: u32) -> Self {
        Cnf { clauses: Vec::new(), var_count }
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn add_clause(&mut self, clause: Clause) {
        assert!(!clause.is_empty(), "empty clause added at construction time");
        debug_assert!(clause.iter().all(|l| l.var().0 < self.var_count));
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, other: Cnf) {
        self.var_count = self.var_count.max(other.var_count);
        self.clauses.extend(other.clauses);
    }

    pub fn write_dimacs<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        writeln!(sink, "p cnf {} {}", self.var_count, self.clauses.len())?;
        let mut line = String::new();
        for clause in &self.clauses {
            line.clear();
            for lit in clause {
                line.push_str(&lit.to_dimacs().to_string());
                line.push(' ');
            }
            line.push('0');
            writeln!(sink, "{line}")?;
        }
        Ok(())
    }

    pub fn to_dimacs_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("DIMACS output is ASCII")
    }

    pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Cnf> {
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            let malformed = |message: String| Error::MalformedLine { line: lineno + 1, message };
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
                continue;
            }
            if trimmed.starts_with('p') {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if fields.len() != 4 || fields[1] != "cnf" || header.is_some() {
                    return Err(malformed(format!("bad problem line {trimmed:?}")));
                }
                let vars = fields[2].parse().map_err(|_| malformed("bad variable count".into()))?;
                let count = fields[3].parse().map_err(|_| malformed("bad clause count".into()))?;
                header = Some((vars, count));
                continue;
            }
            let Some((vars, _)) = header else {
                return Err(malformed("clause before problem line".into()));
            };
            for word in trimmed.split_whitespace() {
                let value: i64 = word.parse().map_err(|_| malformed(format!("bad literal {word:?}")))?;
                if value == 0 {
                    if current.is_empty() {
                        return Err(malformed("empty clause".into()));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else {
                    let lit = Lit::from_dimacs(value)
                        .filter(|l| l.var().0 < vars)
                        .ok_or_else(|| malformed(format!("literal {value} out of range")))?;
                    current.push(lit);
                }
            }
        }
        let (var_count, declared) =
            header.ok_or_else(|| Error::MalformedLine { line: 0, message: "missing problem line".into() })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != declared {
            return Err(Error::MalformedLine {
                line: 0,
                message: format!("header declares {declared} clauses, found {}", clauses.len()),
            });
        }
        Ok(Cnf { clauses, var_count })
    }
}

/// Extra variable pools requested by the active constraints.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AllocOptions {
    /// Allocate the first-support and window markers of the span encoding.
    pub span: bool,
    /// Allocate `K + 1` layers of automaton-state variables with this many states each.
    pub automaton_states: Option<usize>,
}

/// Bijection between the semantic variables of the mining model and solver variables.
///
/// Layout, in allocation order: `m(k, v)` for every pattern position and character (ε last),
/// `c(i)` per transaction, `t(i, j, k)` for `k <= min(j, K)`, the sequential-counter
/// registers, then the optional span and automaton pools. Transactions, positions and
/// pattern positions are 1-based in this API.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    k: usize,
    vocab_size: usize,
    tx_lens: Vec<usize>,
    c_base: u32,
    t_base: Vec<Vec<u32>>,
    counter_base: u32,
    span_base: Option<(u32, u32)>,
    span_offsets: Vec<u32>,
    automaton: Option<(u32, usize)>,
    total: u32,
}

impl VarMap {
    pub fn alloc(dataset: &Dataset, k: usize, options: AllocOptions) -> Result<VarMap> {
        assert!(k >= 1, "pattern bound must be positive");
        let vocab_size = dataset.vocab_size();
        let n = dataset.len() as u64;
        let mut next: u64 = 0;
        let mut take = |count: u64| {
            let base = next;
            next += count;
            base
        };

        take(k as u64 * (vocab_size as u64 + 1));
        let c_base = take(n);
        let tx_lens: Vec<usize> = dataset.transactions().iter().map(Vec::len).collect();
        let mut t_base = Vec::with_capacity(tx_lens.len());
        for &len in &tx_lens {
            let mut row = Vec::with_capacity(len);
            for j in 1..=len {
                row.push(take(j.min(k) as u64));
            }
            t_base.push(row);
        }
        let counter_base = take(n * (n + 1) / 2);

        let total_positions: u64 = tx_lens.iter().map(|&l| l as u64).sum();
        let mut span_offsets = Vec::with_capacity(tx_lens.len());
        let mut acc = 0u64;
        for &len in &tx_lens {
            span_offsets.push(acc);
            acc += len as u64;
        }
        let span_base = options.span.then(|| (take(total_positions), take(total_positions)));
        let automaton = options.automaton_states.map(|states| (take((k as u64 + 1) * states as u64), states));

        if next > i32::MAX as u64 {
            return Err(Error::Overflow(next));
        }
        let narrow = |x: u64| x as u32;
        Ok(VarMap {
            k,
            vocab_size,
            tx_lens,
            c_base: narrow(c_base),
            t_base: t_base.into_iter().map(|row| row.into_iter().map(narrow).collect()).collect(),
            counter_base: narrow(counter_base),
            span_base: span_base.map(|(f, u)| (narrow(f), narrow(u))),
            span_offsets: if options.span { span_offsets.into_iter().map(narrow).collect() } else { Vec::new() },
            automaton: automaton.map(|(base, states)| (narrow(base), states)),
            total: narrow(next),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn transaction_count(&self) -> usize {
        self.tx_lens.len()
    }

    pub fn tx_len(&self, i: usize) -> usize {
        self.tx_lens[i - 1]
    }

    pub fn total_vars(&self) -> u32 {
        self.total
    }

    /// Index of the padding character in the `m` layout.
    pub fn epsilon(&self) -> u32 {
        self.vocab_size as u32
    }

    /// `m(k, v)`: pattern position `k` holds character `v`; `v == epsilon()` is padding.
    pub fn m(&self, k: usize, v: u32) -> Var {
        debug_assert!((1..=self.k).contains(&k) && v as usize <= self.vocab_size);
        Var(((k - 1) * (self.vocab_size + 1)) as u32 + v)
    }

    pub fn m_eps(&self, k: usize) -> Var {
        self.m(k, self.epsilon())
    }

    /// `c(i)`: transaction `i` is covered.
    pub fn c(&self, i: usize) -> Var {
        debug_assert!((1..=self.tx_lens.len()).contains(&i));
        Var(self.c_base + (i - 1) as u32)
    }

    /// `t(i, j, k)`: position `j` of transaction `i` supports pattern position `k`.
    pub fn t(&self, i: usize, j: usize, k: usize) -> Option<Var> {
        if i == 0 || j == 0 || k == 0 || k > j.min(self.k) {
            return None;
        }
        let row = self.t_base.get(i - 1)?;
        row.get(j - 1).map(|&base| Var(base + (k - 1) as u32))
    }

    /// Sequential-counter register: at least `j` of `c(1..=i)` are true.
    pub fn counter(&self, i: usize, j: usize) -> Var {
        debug_assert!(1 <= j && j <= i && i <= self.tx_lens.len());
        Var(self.counter_base + (i * (i - 1) / 2 + (j - 1)) as u32)
    }

    /// `card(tau)`: at least `tau` transactions are covered.
    pub fn card(&self, tau: usize) -> Var {
        self.counter(self.tx_lens.len(), tau)
    }

    /// Span encoding: position `j` of transaction `i` supports the first pattern character.
    pub fn span_first(&self, i: usize, j: usize) -> Option<Var> {
        let (f, _) = self.span_base?;
        Some(Var(f + self.span_offsets[i - 1] + (j - 1) as u32))
    }

    /// Span encoding: position `j` of transaction `i` lies inside the embedding window.
    pub fn span_used(&self, i: usize, j: usize) -> Option<Var> {
        let (_, u) = self.span_base?;
        Some(Var(u + self.span_offsets[i - 1] + (j - 1) as u32))
    }

    pub fn automaton_states(&self) -> Option<usize> {
        self.automaton.map(|(_, s)| s)
    }

    /// Automaton encoding: after reading pattern positions `1..=layer`, the automaton is in `state`.
    pub fn state(&self, layer: usize, state: usize) -> Option<Var> {
        let (base, states) = self.automaton?;
        debug_assert!(layer <= self.k && state < states);
        Some(Var(base + (layer * states + state) as u32))
    }

    /// Every allocated variable with its stable semantic name, in id order.
    pub fn named_vars(&self, dataset: &Dataset) -> Vec<(String, Var)> {
        let mut out = Vec::with_capacity(self.total as usize);
        for k in 1..=self.k {
            for v in 0..=self.vocab_size as u32 {
                let token = if v == self.epsilon() { "ε" } else { dataset.token(v) };
                out.push((format!("m_{k}_{token}"), self.m(k, v)));
            }
        }
        let n = self.tx_lens.len();
        for i in 1..=n {
            out.push((format!("c_{i}"), self.c(i)));
        }
        for (i, &len) in self.tx_lens.iter().enumerate() {
            for j in 1..=len {
                for k in 1..=j.min(self.k) {
                    out.push((format!("t_{}_{j}_{k}", i + 1), self.t(i + 1, j, k).unwrap()));
                }
            }
        }
        for i in 1..=n {
            for j in 1..=i {
                let name = if i == n { format!("card_{j}") } else { format!("cnt_{i}_{j}") };
                out.push((name, self.counter(i, j)));
            }
        }
        if self.span_base.is_some() {
            for (prefix, pick) in [("f", true), ("u", false)] {
                for (i, &len) in self.tx_lens.iter().enumerate() {
                    for j in 1..=len {
                        let var = if pick { self.span_first(i + 1, j) } else { self.span_used(i + 1, j) };
                        out.push((format!("{prefix}_{}_{j}", i + 1), var.unwrap()));
                    }
                }
            }
        }
        if let Some((_, states)) = self.automaton {
            for layer in 0..=self.k {
                for s in 0..states {
                    out.push((format!("q_{layer}_{s}"), self.state(layer, s).unwrap()));
                }
            }
        }
        out
    }

    /// JSON object mapping semantic names to DIMACS ids.
    pub fn to_json(&self, dataset: &Dataset) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .named_vars(dataset)
            .into_iter()
            .map(|(name, var)| (name, serde_json::Value::from(var.dimacs())))
            .collect();
        serde_json::Value::Object(map)
    }

    /// Exact blocking clause: forbids the pattern `chars` (and nothing else) in future models.
    pub fn blocking_clause_exact(&self, chars: &[u32]) -> Clause {
        debug_assert!(!chars.is_empty() && chars.len() <= self.k);
        let mut clause: Clause = chars.iter().enumerate().map(|(idx, &v)| self.m(idx + 1, v).neg()).collect();
        if chars.len() < self.k {
            clause.push(self.m_eps(chars.len() + 1).neg());
        }
        clause
    }

    /// Exact blocking clauses for every distinct nonempty subsequence of `chars`.
    pub fn blocking_clauses_subsequences(&self, chars: &[u32], cap: u64) -> Result<Vec<Clause>> {
        let subsequences = distinct_subsequences(chars, cap)?;
        Ok(subsequences.iter().map(|s| self.blocking_clause_exact(s)).collect())
    }

    /// Literals pinning the decoded pattern to exactly `chars`.
    pub fn pattern_literals(&self, chars: &[u32]) -> Vec<Lit> {
        let mut lits: Vec<Lit> = chars.iter().enumerate().map(|(idx, &v)| self.m(idx + 1, v).pos()).collect();
        if chars.len() < self.k {
            lits.push(self.m_eps(chars.len() + 1).pos());
        }
        lits
    }

    /// Reads the pattern, its covered transactions and optionally one embedding per covered
    /// transaction from a total assignment.
    pub fn decode_pattern(&self, model: &[bool], with_witness: bool) -> Result<Pattern> {
        let mut chars = Vec::new();
        let mut ended = false;
        for k in 1..=self.k {
            let mut assigned = (0..=self.vocab_size as u32).filter(|&v| self.m(k, v).pos().eval(model));
            let v = match (assigned.next(), assigned.next()) {
                (Some(v), None) => v,
                (None, _) => return Err(Error::IllFormedModel(format!("no character at position {k}"))),
                (Some(_), Some(_)) => return Err(Error::IllFormedModel(format!("several characters at position {k}"))),
            };
            if v == self.epsilon() {
                ended = true;
            } else if !ended {
                chars.push(v);
            }
        }
        if chars.is_empty() {
            return Err(Error::IllFormedModel("empty pattern".into()));
        }
        let cover: Vec<usize> = (1..=self.tx_lens.len()).filter(|&i| self.c(i).pos().eval(model)).collect();
        let witness = with_witness.then(|| {
            cover
                .iter()
                .map(|&i| {
                    let positions = (1..=chars.len())
                        .filter_map(|k| {
                            (k..=self.tx_len(i)).find(|&j| self.t(i, j, k).is_some_and(|t| t.pos().eval(model)))
                        })
                        .collect();
                    Embedding { transaction: i, positions }
                })
                .collect()
        });
        Ok(Pattern { chars, support: cover.len(), cover, witness })
    }
}

/// Every distinct nonempty subsequence of `chars`, in lexicographic order.
pub fn distinct_subsequences(chars: &[u32], cap: u64) -> Result<BTreeSet<Vec<u32>>> {
    let n = chars.len();
    if n >= 64 || (1u64 << n) > cap {
        return Err(Error::SubsequenceBlowup { length: n, cap, pattern: chars.to_vec() });
    }
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << n) {
        out.insert((0..n).filter(|&b| mask >> b & 1 == 1).map(|b| chars[b]).collect());
    }
    Ok(out)
}

/// One embedding: 1-based positions in a 1-based transaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub transaction: usize,
    pub positions: Vec<usize>,
}

/// A mined sequence with its support. `cover` lists the covered transactions (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub chars: Vec<u32>,
    pub support: usize,
    pub cover: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Embedding>>,
}
