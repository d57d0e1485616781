//! CNF encoding of frequent-sequence mining and its user constraints.
//!
//! Indices follow [`VarMap`]: transactions `i`, transaction positions `j` and pattern
//! positions `k` are all 1-based.

pub mod regex;

use crate::cnf::{AllocOptions, Cnf, Lit, VarMap};
use crate::dataset::{Dataset, GapTable, MiningConfig};
use crate::error::Result;

pub use regex::{compile_regex, encode_regular, Dfa};

/// A complete encoding of one mining configuration.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub k: usize,
    pub varmap: VarMap,
    pub cnf: Cnf,
    pub dfa: Option<Dfa>,
}

/// Builds the full formula for `config`: base model, cardinality, and every active constraint.
pub fn encode(dataset: &Dataset, config: &MiningConfig) -> Result<Encoding> {
    config.validate(dataset)?;
    let k = dataset.compute_k(config.minsup)?;
    let dfa = config.regex.as_deref().map(|r| compile_regex(r, dataset)).transpose()?;
    let options = AllocOptions { span: config.max_span.is_some(), automaton_states: dfa.as_ref().map(Dfa::states) };
    let varmap = VarMap::alloc(dataset, k, options)?;

    let mut cnf = encode_structure(dataset, &varmap);
    match config.max_gap {
        Some(gap) => cnf.extend(encode_max_gap(dataset, gap, &varmap)),
        None => cnf.extend(encode_order(dataset, &varmap)),
    }
    if let Some(table) = &config.dep_gap {
        cnf.extend(encode_dep_gap(dataset, table, &varmap)?);
    }
    if let Some(span) = config.max_span {
        cnf.extend(encode_max_span(dataset, span, &varmap));
    }
    if let Some(dfa) = &dfa {
        cnf.extend(encode_regular(dfa, &varmap));
    }
    let cover = cover_literals(&varmap);
    cnf.extend(encode_cardinality(&cover, config.minsup, &varmap));
    Ok(Encoding { k, varmap, cnf, dfa })
}

pub fn cover_literals(varmap: &VarMap) -> Vec<Lit> {
    (1..=varmap.transaction_count()).map(|i| varmap.c(i).pos()).collect()
}

/// Base model without cardinality: well-formedness, padding symmetry, support
/// compatibility, coverage, single support per pattern position and order preservation.
pub fn encode_base(dataset: &Dataset, varmap: &VarMap) -> Cnf {
    let mut cnf = encode_structure(dataset, varmap);
    cnf.extend(encode_order(dataset, varmap));
    cnf
}

/// Every base clause family except order preservation, plus the unit excluding the empty
/// pattern.
pub fn encode_structure(dataset: &Dataset, varmap: &VarMap) -> Cnf {
    let k_max = varmap.k();
    let eps = varmap.epsilon();
    let mut cnf = Cnf::new(varmap.total_vars());

    for k in 1..=k_max {
        cnf.add_clause((0..=eps).map(|v| varmap.m(k, v).pos()).collect());
        for v in 0..=eps {
            for w in v + 1..=eps {
                cnf.add_clause(vec![varmap.m(k, v).neg(), varmap.m(k, w).neg()]);
            }
        }
    }
    for k in 1..k_max {
        cnf.add_clause(vec![varmap.m_eps(k).neg(), varmap.m_eps(k + 1).pos()]);
    }
    cnf.add_clause(vec![varmap.m_eps(1).neg()]);

    for (idx, tx) in dataset.transactions().iter().enumerate() {
        let i = idx + 1;
        for (jdx, &v) in tx.iter().enumerate() {
            let j = jdx + 1;
            for k in 1..=j.min(k_max) {
                cnf.add_clause(vec![varmap.t(i, j, k).unwrap().neg(), varmap.m(k, v).pos()]);
            }
        }
        for k in 1..=k_max {
            let mut clause = vec![varmap.c(i).neg(), varmap.m_eps(k).pos()];
            clause.extend((k..=tx.len()).map(|j| varmap.t(i, j, k).unwrap().pos()));
            cnf.add_clause(clause);

            for j in k..=tx.len() {
                for j2 in j + 1..=tx.len() {
                    cnf.add_clause(vec![varmap.t(i, j, k).unwrap().neg(), varmap.t(i, j2, k).unwrap().neg()]);
                }
            }
        }
    }
    cnf
}

/// `t(i, j, k)` needs a support for position `k - 1` somewhere in `lo..j`.
fn predecessor_clause(varmap: &VarMap, i: usize, j: usize, k: usize, lo: usize, extra: Option<Lit>) -> Vec<Lit> {
    let mut clause = vec![varmap.t(i, j, k).unwrap().neg()];
    clause.extend(extra);
    clause.extend((lo.max(k - 1)..j).map(|jp| varmap.t(i, jp, k - 1).unwrap().pos()));
    clause
}

/// Order preservation: a support for pattern position `k >= 2` requires an earlier support
/// for position `k - 1`.
pub fn encode_order(dataset: &Dataset, varmap: &VarMap) -> Cnf {
    let mut cnf = Cnf::new(varmap.total_vars());
    for (idx, tx) in dataset.transactions().iter().enumerate() {
        for j in 2..=tx.len() {
            for k in 2..=j.min(varmap.k()) {
                cnf.add_clause(predecessor_clause(varmap, idx + 1, j, k, 1, None));
            }
        }
    }
    cnf
}

/// Maximum gap: the predecessor support lies among the `gap` positions before `j`.
/// Replaces [`encode_order`], which it strengthens.
pub fn encode_max_gap(dataset: &Dataset, gap: usize, varmap: &VarMap) -> Cnf {
    let mut cnf = Cnf::new(varmap.total_vars());
    for (idx, tx) in dataset.transactions().iter().enumerate() {
        for j in 2..=tx.len() {
            for k in 2..=j.min(varmap.k()) {
                cnf.add_clause(predecessor_clause(varmap, idx + 1, j, k, j.saturating_sub(gap), None));
            }
        }
    }
    cnf
}

/// Dependent gap: when pattern position `k - 1` holds `v`, the predecessor support lies
/// among the `gap(k - 1, v)` positions before `j`.
pub fn encode_dep_gap(dataset: &Dataset, table: &GapTable, varmap: &VarMap) -> Result<Cnf> {
    table.check_total(varmap.k(), dataset)?;
    let mut cnf = Cnf::new(varmap.total_vars());
    for (idx, tx) in dataset.transactions().iter().enumerate() {
        for j in 2..=tx.len() {
            for k in 2..=j.min(varmap.k()) {
                for v in 0..dataset.vocab_size() as u32 {
                    let gap = table.get(k - 1, v).expect("checked total");
                    let lo = j.saturating_sub(gap);
                    // Windows reaching back to k - 1 are implied by order preservation.
                    if lo < k {
                        continue;
                    }
                    let guard = Some(varmap.m(k - 1, v).neg());
                    cnf.add_clause(predecessor_clause(varmap, idx + 1, j, k, lo, guard));
                }
            }
        }
    }
    Ok(cnf)
}

/// Maximum span: in every covered transaction the first and last supports are at most
/// `span` positions apart.
///
/// `f(i, j)` marks the support of the first pattern character, `u(i, j)` marks positions of
/// the window that starts at that support and extends over every used support. Two marked
/// positions `span + 1` apart are forbidden.
pub fn encode_max_span(dataset: &Dataset, span: usize, varmap: &VarMap) -> Cnf {
    let mut cnf = Cnf::new(varmap.total_vars());
    for (idx, tx) in dataset.transactions().iter().enumerate() {
        let i = idx + 1;
        let f = |j: usize| varmap.span_first(i, j).expect("span pool not allocated");
        let u = |j: usize| varmap.span_used(i, j).expect("span pool not allocated");
        for j in 1..=tx.len() {
            let first = varmap.t(i, j, 1).unwrap();
            cnf.add_clause(vec![first.neg(), f(j).pos()]);
            cnf.add_clause(vec![first.pos(), f(j).neg()]);
            for k in 1..=j.min(varmap.k()) {
                cnf.add_clause(vec![varmap.t(i, j, k).unwrap().neg(), u(j).pos()]);
            }
            let mut extend = vec![u(j).neg(), f(j).pos()];
            if j > 1 {
                extend.push(u(j - 1).pos());
            }
            cnf.add_clause(extend);
            if j + span < tx.len() {
                cnf.add_clause(vec![varmap.c(i).neg(), u(j).neg(), u(j + span + 1).neg()]);
            }
        }
    }
    cnf
}

/// Sequential-counter registers over `cover`: `counter(i, j)` implies at least `j` of the
/// first `i` literals are true, and `card(tau + 1)` implies `card(tau)`.
pub fn encode_counter(cover: &[Lit], varmap: &VarMap) -> Cnf {
    let n = cover.len();
    assert_eq!(n, varmap.transaction_count());
    let s = |i: usize, j: usize| varmap.counter(i, j);
    let mut cnf = Cnf::new(varmap.total_vars());
    cnf.add_clause(vec![s(1, 1).neg(), cover[0]]);
    for i in 2..=n {
        for j in 1..=i {
            if j < i {
                cnf.add_clause(vec![s(i, j).neg(), s(i - 1, j).pos(), cover[i - 1]]);
            } else {
                cnf.add_clause(vec![s(i, j).neg(), cover[i - 1]]);
            }
            if j >= 2 {
                let mut clause = vec![s(i, j).neg(), s(i - 1, j - 1).pos()];
                if j < i {
                    clause.push(s(i - 1, j).pos());
                }
                cnf.add_clause(clause);
            }
        }
    }
    for tau in 1..n {
        cnf.add_clause(vec![varmap.card(tau + 1).neg(), varmap.card(tau).pos()]);
    }
    cnf
}

/// At least `minsup` of `cover` are true: the counter plus the unit `card(minsup)`.
pub fn encode_cardinality(cover: &[Lit], minsup: usize, varmap: &VarMap) -> Cnf {
    let mut cnf = encode_counter(cover, varmap);
    cnf.add_clause(vec![varmap.card(minsup).pos()]);
    cnf
}
