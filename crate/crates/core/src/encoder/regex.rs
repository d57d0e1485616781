//! Regular pattern constraints: compilation to a complete minimal DFA over the vocabulary,
//! and the unrolled-automaton CNF encoding.
//!
//! Syntax, over whitespace-separated vocabulary tokens:
//!
//! * a token matches itself;
//! * `.` matches any single token;
//! * `*` or `⋆` matches any (possibly empty) token sequence;
//! * `a | b` is alternation, `( ... )` groups.
//!
//! A word that is itself a vocabulary token is always read as a literal. Otherwise the
//! operator characters split the word, so `A.*` reads as `A . *`.

use std::collections::{BTreeSet, HashMap};

use crate::cnf::{Cnf, VarMap};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Deterministic, complete automaton over character indices `0..alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub start: usize,
    pub accepting: Vec<bool>,
    /// `delta[state][character]`.
    pub delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn alphabet(&self) -> usize {
        self.delta.first().map_or(0, Vec::len)
    }

    pub fn run(&self, chars: &[u32]) -> usize {
        chars.iter().fold(self.start, |s, &c| self.delta[s][c as usize])
    }

    pub fn accepts(&self, chars: &[u32]) -> bool {
        self.accepting[self.run(chars)]
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let mut live = self.accepting.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..self.states() {
                if !live[s] && self.delta[s].iter().any(|&t| live[t]) {
                    live[s] = true;
                    changed = true;
                }
            }
        }
        live
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Symbol {
    Token(u32),
    Any,
    Wildcard,
    Alt,
    Open,
    Close,
}

fn lex(pattern: &str, dataset: &Dataset) -> Result<Vec<Symbol>> {
    let mut out = Vec::new();
    for word in pattern.split_whitespace() {
        if let Some(c) = dataset.index_of(word) {
            out.push(Symbol::Token(c));
            continue;
        }
        let mut run = String::new();
        let flush = |run: &mut String, out: &mut Vec<Symbol>| -> Result<()> {
            if !run.is_empty() {
                let c = dataset.index_of(run).ok_or_else(|| Error::TokenNotInVocabulary(run.clone()))?;
                out.push(Symbol::Token(c));
                run.clear();
            }
            Ok(())
        };
        for ch in word.chars() {
            let op = match ch {
                '(' => Some(Symbol::Open),
                ')' => Some(Symbol::Close),
                '|' => Some(Symbol::Alt),
                '*' | '⋆' => Some(Symbol::Wildcard),
                '.' => Some(Symbol::Any),
                _ => None,
            };
            match op {
                Some(op) => {
                    flush(&mut run, &mut out)?;
                    out.push(op);
                }
                None => run.push(ch),
            }
        }
        flush(&mut run, &mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum Label {
    Char(u32),
    Any,
}

#[derive(Debug, Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    edges: Vec<Vec<(Label, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.eps.len() - 1
    }

    fn closure(&self, states: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = states.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if states.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
}

/// Recursive-descent parser that emits Thompson fragments `(entry, exit)`.
struct Parser<'a> {
    symbols: &'a [Symbol],
    pos: usize,
    nfa: Nfa,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> Error {
        Error::RegexSyntax { position: self.pos, message: message.into() }
    }

    fn alternation(&mut self) -> Result<(usize, usize)> {
        let mut branches = vec![self.concatenation()?];
        while self.symbols.get(self.pos) == Some(&Symbol::Alt) {
            self.pos += 1;
            branches.push(self.concatenation()?);
        }
        if branches.len() == 1 {
            return Ok(branches[0]);
        }
        let (entry, exit) = (self.nfa.state(), self.nfa.state());
        for (b_entry, b_exit) in branches {
            self.nfa.eps[entry].push(b_entry);
            self.nfa.eps[b_exit].push(exit);
        }
        Ok((entry, exit))
    }

    fn concatenation(&mut self) -> Result<(usize, usize)> {
        let entry = self.nfa.state();
        let mut exit = entry;
        while let Some(symbol) = self.symbols.get(self.pos) {
            let (a, b) = match symbol {
                Symbol::Alt | Symbol::Close => break,
                Symbol::Token(c) => {
                    let c = *c;
                    self.pos += 1;
                    self.single(Label::Char(c))
                }
                Symbol::Any => {
                    self.pos += 1;
                    self.single(Label::Any)
                }
                Symbol::Wildcard => {
                    self.pos += 1;
                    let s = self.nfa.state();
                    self.nfa.edges[s].push((Label::Any, s));
                    (s, s)
                }
                Symbol::Open => {
                    self.pos += 1;
                    let group = self.alternation()?;
                    if self.symbols.get(self.pos) != Some(&Symbol::Close) {
                        return Err(self.syntax("unclosed group"));
                    }
                    self.pos += 1;
                    group
                }
            };
            self.nfa.eps[exit].push(a);
            exit = b;
        }
        Ok((entry, exit))
    }

    fn single(&mut self, label: Label) -> (usize, usize) {
        let (a, b) = (self.nfa.state(), self.nfa.state());
        self.nfa.edges[a].push((label, b));
        (a, b)
    }
}

/// Compiles `pattern` into a complete, minimal DFA over the dataset vocabulary.
pub fn compile_regex(pattern: &str, dataset: &Dataset) -> Result<Dfa> {
    let symbols = lex(pattern, dataset)?;
    let mut parser = Parser { symbols: &symbols, pos: 0, nfa: Nfa::default() };
    let (entry, exit) = parser.alternation()?;
    if parser.pos != symbols.len() {
        return Err(parser.syntax("unexpected ')'"));
    }
    let nfa = parser.nfa;
    let alphabet = dataset.vocab_size();

    let mut start = BTreeSet::from([entry]);
    nfa.closure(&mut start);
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < subsets.len() {
        let mut row = Vec::with_capacity(alphabet);
        for c in 0..alphabet as u32 {
            let mut target = BTreeSet::new();
            for &s in &subsets[next] {
                for &(label, t) in &nfa.edges[s] {
                    if matches!(label, Label::Any) || matches!(label, Label::Char(x) if x == c) {
                        target.insert(t);
                    }
                }
            }
            nfa.closure(&mut target);
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    ids.insert(target.clone(), id);
                    subsets.push(target);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        next += 1;
    }
    let accepting = subsets.iter().map(|s| s.contains(&exit)).collect();
    Ok(minimize(&Dfa { start: 0, accepting, delta }))
}

/// Moore partition refinement; states are renumbered in breadth-first order from the start.
fn minimize(dfa: &Dfa) -> Dfa {
    let n = dfa.states();
    let mut class: Vec<usize> = dfa.accepting.iter().map(|&a| usize::from(a)).collect();
    loop {
        let mut signatures: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![0; n];
        for s in 0..n {
            let key = (class[s], dfa.delta[s].iter().map(|&t| class[t]).collect::<Vec<_>>());
            let fresh = signatures.len();
            refined[s] = *signatures.entry(key).or_insert(fresh);
        }
        let stable = signatures.len() == class.iter().collect::<BTreeSet<_>>().len();
        class = refined;
        if stable {
            break;
        }
    }
    let mut order: HashMap<usize, usize> = HashMap::new();
    let mut queue = vec![class[dfa.start]];
    let mut representative: HashMap<usize, usize> = HashMap::new();
    for (s, &cls) in class.iter().enumerate().take(n) {
        representative.entry(cls).or_insert(s);
    }
    order.insert(class[dfa.start], 0);
    let mut head = 0;
    while head < queue.len() {
        let cls = queue[head];
        head += 1;
        for &t in &dfa.delta[representative[&cls]] {
            if !order.contains_key(&class[t]) {
                order.insert(class[t], order.len());
                queue.push(class[t]);
            }
        }
    }
    let delta =
        queue.iter().map(|cls| dfa.delta[representative[cls]].iter().map(|&t| order[&class[t]]).collect()).collect();
    let accepting = queue.iter().map(|cls| dfa.accepting[representative[cls]]).collect();
    Dfa { start: 0, accepting, delta }
}

/// Unrolled automaton: state variables for layers `0..=K`, one state per layer, the start
/// layer fixed, transitions driven by the `m` variables, padding freezing the state, and
/// the final layer restricted to accepting states.
pub fn encode_regular(dfa: &Dfa, varmap: &VarMap) -> Cnf {
    let states = dfa.states();
    assert_eq!(varmap.automaton_states(), Some(states), "automaton pool not allocated");
    let k_max = varmap.k();
    let q = |layer: usize, s: usize| varmap.state(layer, s).unwrap();
    let mut cnf = Cnf::new(varmap.total_vars());
    for layer in 0..=k_max {
        cnf.add_clause((0..states).map(|s| q(layer, s).pos()).collect());
        for a in 0..states {
            for b in a + 1..states {
                cnf.add_clause(vec![q(layer, a).neg(), q(layer, b).neg()]);
            }
        }
    }
    cnf.add_clause(vec![q(0, dfa.start).pos()]);
    for k in 1..=k_max {
        for s in 0..states {
            for (c, &target) in dfa.delta[s].iter().enumerate() {
                cnf.add_clause(vec![q(k - 1, s).neg(), varmap.m(k, c as u32).neg(), q(k, target).pos()]);
            }
            cnf.add_clause(vec![q(k - 1, s).neg(), varmap.m_eps(k).neg(), q(k, s).pos()]);
        }
    }
    for s in 0..states {
        if !dfa.accepting[s] {
            cnf.add_clause(vec![q(k_max, s).neg()]);
        }
    }
    cnf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(tokens: &[&str]) -> Dataset {
        Dataset::from_token_sequences([tokens.to_vec()]).unwrap()
    }

    #[test]
    fn single_literal() {
        let d = vocab(&["A", "B"]);
        let dfa = compile_regex("A", &d).unwrap();
        assert_eq!(dfa.states(), 3);
        assert_eq!(dfa.live_states().iter().filter(|&&l| l).count(), 2);
        assert!(dfa.accepts(&[0]));
        assert!(!dfa.accepts(&[]));
        assert!(!dfa.accepts(&[1]));
        assert!(!dfa.accepts(&[0, 0]));
    }

    #[test]
    fn wildcard_is_a_single_accepting_sink() {
        let d = vocab(&["A", "B"]);
        let dfa = compile_regex("⋆", &d).unwrap();
        assert_eq!(dfa.states(), 1);
        assert!(dfa.accepting[0]);
        assert!(dfa.accepts(&[]));
        assert!(dfa.accepts(&[1, 0, 1]));
    }

    #[test]
    fn ordered_words() {
        let d = vocab(&["we", "machine", "learning", "propose"]);
        let dfa = compile_regex("⋆ machine ⋆ learning ⋆", &d).unwrap();
        let enc = |s: &str| d.parse_pattern(s).unwrap();
        assert!(dfa.accepts(&enc("machine learning")));
        assert!(dfa.accepts(&enc("we propose machine we learning")));
        assert!(!dfa.accepts(&enc("learning machine")));
        assert!(!dfa.accepts(&enc("machine")));
    }

    #[test]
    fn operators_split_unknown_words() {
        let d = vocab(&["A", "B", "C"]);
        let dfa = compile_regex("A.*", &d).unwrap();
        assert!(dfa.accepts(&[0, 1]));
        assert!(dfa.accepts(&[0, 1, 2]));
        assert!(!dfa.accepts(&[0]));
        assert!(!dfa.accepts(&[1, 0]));
        let dfa = compile_regex("(A|B) C", &d).unwrap();
        assert!(dfa.accepts(&[0, 2]) && dfa.accepts(&[1, 2]) && !dfa.accepts(&[2, 2]));
    }

    #[test]
    fn errors() {
        let d = vocab(&["A", "B"]);
        assert!(matches!(compile_regex("(A", &d), Err(Error::RegexSyntax { .. })));
        assert!(matches!(compile_regex("A)", &d), Err(Error::RegexSyntax { .. })));
        assert!(matches!(compile_regex("A Z", &d), Err(Error::TokenNotInVocabulary(t)) if t == "Z"));
    }
}
