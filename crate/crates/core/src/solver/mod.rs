//! Incremental CDCL SAT solver.
//!
//! Two watched literals with blockers, first-UIP learning with local minimization, VSIDS
//! branching with phase saving, Luby restarts and LBD-based learned clause reduction.
//! Assumptions are decided first, one per decision level, so learned clauses never depend
//! on them and remain valid across calls.

pub mod external;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cnf::{Clause, Cnf, Lit, Var};

mod heap;

use heap::VarHeap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// A total model, indexed by variable.
    Sat(Vec<bool>),
    /// A subset of the assumptions that is inconsistent with the clauses. Empty when the
    /// clause database alone is unsatisfiable.
    Unsat(Vec<Lit>),
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

/// Minimal incremental interface the miners drive.
pub trait SatBackend {
    fn ensure_vars(&mut self, count: u32);
    /// Returns false once the clause database is known to be unsatisfiable.
    fn add_clause(&mut self, clause: &[Lit]) -> bool;
    fn solve(&mut self, assumptions: &[Lit]) -> SolveResult;
    fn stats(&self) -> SolverStats;

    fn add_cnf(&mut self, cnf: &Cnf) -> bool {
        self.ensure_vars(cnf.var_count());
        let mut ok = true;
        for clause in cnf.clauses() {
            ok &= self.add_clause(clause);
        }
        ok
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub seed: u64,
    /// Probability of a random branching decision.
    pub random_var_freq: f64,
    pub var_decay: f64,
    pub clause_decay: f64,
    /// Conflicts in the first Luby restart interval.
    pub restart_base: u64,
    /// Check every model against the clause database before returning it.
    pub check_models: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            random_var_freq: 0.0,
            var_decay: 0.95,
            clause_decay: 0.999,
            restart_base: 100,
            check_models: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned: u64,
    pub deleted: u64,
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

type CRef = u32;

#[derive(Debug)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: CRef,
    blocker: Lit,
}

enum SearchOutcome {
    Sat,
    Unsat,
    Restart,
}

pub struct Solver {
    config: SolverConfig,
    clauses: Vec<ClauseData>,
    free_slots: Vec<CRef>,
    problem: Vec<CRef>,
    learnts: Vec<CRef>,
    /// `watches[l]` holds the clauses watching literal `l`; visited when `l` becomes false.
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<CRef>>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    heap: VarHeap,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    var_inc: f64,
    cla_inc: f64,
    max_learnts: f64,
    ok: bool,
    assumptions: Vec<Lit>,
    core: Vec<Lit>,
    rng: ChaCha8Rng,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver {
            config,
            clauses: Vec::new(),
            free_slots: Vec::new(),
            problem: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            heap: VarHeap::default(),
            seen: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            var_inc: 1.0,
            cla_inc: 1.0,
            max_learnts: 0.0,
            ok: true,
            assumptions: Vec::new(),
            core: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            stats: SolverStats::default(),
        }
    }

    pub fn from_cnf(cnf: &Cnf, config: SolverConfig) -> Self {
        let mut solver = Solver::new(config);
        solver.add_cnf(cnf);
        solver
    }

    pub fn num_vars(&self) -> u32 {
        self.assigns.len() as u32
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.assigns.len() as u32);
        self.assigns.push(UNDEF);
        self.level.push(0);
        self.reason.push(None);
        self.polarity.push(false);
        self.activity.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.insert(v.0, &self.activity);
        v
    }

    /// False once the clause database has been found unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn num_clauses(&self) -> usize {
        self.problem.len()
    }

    pub fn num_learnts(&self) -> usize {
        self.learnts.len()
    }

    #[inline]
    fn value(&self, lit: Lit) -> i8 {
        let v = self.assigns[lit.var().index()];
        if lit.is_negated() {
            -v
        } else {
            v
        }
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let top = lits.iter().map(|l| l.var().0 + 1).max().unwrap_or(0);
        while self.num_vars() < top {
            self.new_var();
        }
        let mut clause: Clause = lits.to_vec();
        clause.sort_unstable();
        clause.dedup();
        let mut kept = Vec::with_capacity(clause.len());
        for (idx, &lit) in clause.iter().enumerate() {
            if idx + 1 < clause.len() && clause[idx + 1] == !lit {
                return true;
            }
            match self.value(lit) {
                TRUE => return true,
                FALSE => {}
                _ => kept.push(lit),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(kept[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                let cref = self.alloc_clause(kept, false, 0);
                self.problem.push(cref);
                true
            }
        }
    }

    fn alloc_clause(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> CRef {
        debug_assert!(lits.len() >= 2);
        let data = ClauseData { lits, learnt, deleted: false, lbd, activity: 0.0 };
        let cref = match self.free_slots.pop() {
            Some(slot) => {
                self.clauses[slot as usize] = data;
                slot
            }
            None => {
                self.clauses.push(data);
                (self.clauses.len() - 1) as CRef
            }
        };
        let (l0, l1) = {
            let lits = &self.clauses[cref as usize].lits;
            (lits[0], lits[1])
        };
        self.watches[l0.code()].push(Watcher { cref, blocker: l1 });
        self.watches[l1.code()].push(Watcher { cref, blocker: l0 });
        cref
    }

    #[inline]
    fn enqueue(&mut self, lit: Lit, reason: Option<CRef>) {
        let v = lit.var().index();
        debug_assert_eq!(self.assigns[v], UNDEF);
        self.assigns[v] = if lit.is_negated() { FALSE } else { TRUE };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                let clause = &mut self.clauses[cref as usize];
                if clause.deleted {
                    continue;
                }
                if clause.lits[0] == false_lit {
                    clause.lits.swap(0, 1);
                }
                let first = clause.lits[0];
                let first_value = {
                    let v = self.assigns[first.var().index()];
                    if first.is_negated() {
                        -v
                    } else {
                        v
                    }
                };
                if first != w.blocker && first_value == TRUE {
                    ws[j] = Watcher { cref, blocker: first };
                    j += 1;
                    continue;
                }
                for k in 2..clause.lits.len() {
                    let candidate = clause.lits[k];
                    let cv = self.assigns[candidate.var().index()];
                    let cv = if candidate.is_negated() { -cv } else { cv };
                    if cv != FALSE {
                        clause.lits.swap(1, k);
                        self.watches[candidate.code()].push(Watcher { cref, blocker: first });
                        continue 'watchers;
                    }
                }
                ws[j] = Watcher { cref, blocker: first };
                j += 1;
                if first_value == FALSE {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn cancel_until(&mut self, target: usize) {
        if self.decision_level() <= target {
            return;
        }
        let lim = self.trail_lim[target];
        for idx in (lim..self.trail.len()).rev() {
            let lit = self.trail[idx];
            let v = lit.var().index();
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.polarity[v] = !lit.is_negated();
            if !self.heap.contains(v as u32) {
                self.heap.insert(v as u32, &self.activity);
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(target);
        self.qhead = lim;
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        if self.heap.contains(v as u32) {
            self.heap.increase(v as u32, &self.activity);
        }
    }

    fn bump_clause(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting literal first)
    /// and the backjump level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit::from_dimacs(1).unwrap()];
        let mut path_count = 0usize;
        let mut asserting: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let start = usize::from(asserting.is_some());
            let len = self.clauses[confl as usize].lits.len();
            for k in start..len {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var().index()] = false;
            path_count -= 1;
            asserting = Some(p);
            if path_count == 0 {
                break;
            }
            confl = self.reason[p.var().index()].expect("implied literal has a reason");
        }
        learnt[0] = !asserting.unwrap();

        // Drop literals implied by other literals of the clause.
        let marked: Vec<Lit> = learnt[1..].to_vec();
        let mut kept = vec![learnt[0]];
        for &lit in &marked {
            let v = lit.var().index();
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..].iter().all(|q| {
                    let qv = q.var().index();
                    self.seen[qv] || self.level[qv] == 0
                }),
            };
            if !redundant {
                kept.push(lit);
            }
        }
        for lit in marked {
            self.seen[lit.var().index()] = false;
        }
        let mut learnt = kept;

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let mut max_idx = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().index()] > self.level[learnt[max_idx].var().index()] {
                    max_idx = k;
                }
            }
            learnt.swap(1, max_idx);
            self.level[learnt[1].var().index()] as usize
        };
        (learnt, backjump)
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var().index()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    /// Collects the assumptions responsible for `failed` (an assumption that is false).
    fn analyze_final(&mut self, failed: Lit) -> Vec<Lit> {
        let mut core = vec![failed];
        if self.decision_level() == 0 {
            return core;
        }
        let fv = failed.var().index();
        self.seen[fv] = true;
        for idx in (self.trail_lim[0]..self.trail.len()).rev() {
            let v = self.trail[idx].var().index();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    if self.trail[idx] != failed {
                        core.push(self.trail[idx]);
                    }
                }
                Some(r) => {
                    for k in 1..self.clauses[r as usize].lits.len() {
                        let q = self.clauses[r as usize].lits[k].var().index();
                        if self.level[q] > 0 {
                            self.seen[q] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[fv] = false;
        core
    }

    fn locked(&self, cref: CRef) -> bool {
        let first = self.clauses[cref as usize].lits[0];
        self.value(first) == TRUE && self.reason[first.var().index()] == Some(cref)
    }

    fn reduce_db(&mut self) {
        let mut candidates: Vec<CRef> = self.learnts.clone();
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.partial_cmp(&cb.activity).unwrap())
        });
        let limit = candidates.len() / 2;
        let mut removed = 0;
        for &cref in &candidates {
            if removed >= limit {
                break;
            }
            let c = &self.clauses[cref as usize];
            if c.lbd <= 2 || c.lits.len() <= 2 || self.locked(cref) {
                continue;
            }
            self.clauses[cref as usize].deleted = true;
            removed += 1;
        }
        if removed == 0 {
            return;
        }
        for ws in &mut self.watches {
            ws.retain(|w| !self.clauses[w.cref as usize].deleted);
        }
        let clauses = &mut self.clauses;
        let free = &mut self.free_slots;
        self.learnts.retain(|&cref| {
            let c = &mut clauses[cref as usize];
            if c.deleted {
                c.lits = Vec::new();
                free.push(cref);
                false
            } else {
                true
            }
        });
        self.stats.deleted += removed as u64;
    }

    fn pick_branch_lit(&mut self) -> Option<Lit> {
        if self.config.random_var_freq > 0.0
            && !self.heap.is_empty()
            && self.rng.gen::<f64>() < self.config.random_var_freq
        {
            let v = self.heap.at(self.rng.gen_range(0..self.heap.len()));
            if self.assigns[v as usize] == UNDEF {
                return Some(Var(v).lit(self.polarity[v as usize]));
            }
        }
        while let Some(v) = self.heap.pop_max(&self.activity) {
            if self.assigns[v as usize] == UNDEF {
                return Some(Var(v).lit(self.polarity[v as usize]));
            }
        }
        None
    }

    fn search(&mut self, conflict_budget: u64) -> SearchOutcome {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchOutcome::Unsat;
                }
                let (learnt, backjump) = self.analyze(confl);
                self.cancel_until(backjump);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let lbd = self.lbd(&learnt);
                    let asserting = learnt[0];
                    let cref = self.alloc_clause(learnt, true, lbd);
                    self.learnts.push(cref);
                    self.bump_clause(cref);
                    self.enqueue(asserting, Some(cref));
                }
                self.stats.learned += 1;
                self.var_inc /= self.config.var_decay;
                self.cla_inc /= self.config.clause_decay;
                continue;
            }

            if conflicts >= conflict_budget {
                self.stats.restarts += 1;
                self.cancel_until(0);
                return SearchOutcome::Restart;
            }
            if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                self.reduce_db();
                self.max_learnts *= 1.1;
            }

            let mut next = None;
            while self.decision_level() < self.assumptions.len() {
                let p = self.assumptions[self.decision_level()];
                match self.value(p) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => {
                        self.core = self.analyze_final(p);
                        return SearchOutcome::Unsat;
                    }
                    _ => {
                        next = Some(p);
                        break;
                    }
                }
            }
            let next = match next {
                Some(p) => p,
                None => {
                    self.stats.decisions += 1;
                    match self.pick_branch_lit() {
                        Some(p) => p,
                        None => return SearchOutcome::Sat,
                    }
                }
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, None);
        }
    }

    /// Solves under `assumptions`. The solver is back at decision level 0 afterwards, so
    /// clauses may be added between calls.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.stats.solves += 1;
        self.core.clear();
        if !self.ok {
            return SolveResult::Unsat(Vec::new());
        }
        let top = assumptions.iter().map(|l| l.var().0 + 1).max().unwrap_or(0);
        while self.num_vars() < top {
            self.new_var();
        }
        self.assumptions = assumptions.to_vec();
        self.max_learnts = self.max_learnts.max(self.problem.len() as f64 / 3.0 + 2000.0);
        let mut restarts = 0u32;
        let outcome = loop {
            let budget = luby(2.0, restarts) * self.config.restart_base as f64;
            match self.search(budget as u64) {
                SearchOutcome::Restart => restarts += 1,
                done => break done,
            }
        };
        let result = match outcome {
            SearchOutcome::Sat => {
                let model: Vec<bool> = self.assigns.iter().map(|&a| a == TRUE).collect();
                if self.config.check_models {
                    self.check_model(&model);
                }
                SolveResult::Sat(model)
            }
            _ => SolveResult::Unsat(std::mem::take(&mut self.core)),
        };
        self.cancel_until(0);
        self.assumptions.clear();
        result
    }

    fn check_model(&self, model: &[bool]) {
        for &cref in &self.problem {
            let c = &self.clauses[cref as usize];
            assert!(c.lits.iter().any(|l| l.eval(model)), "model falsifies a problem clause");
        }
        for &a in &self.assumptions {
            assert!(a.eval(model), "model falsifies an assumption");
        }
    }
}

impl SatBackend for Solver {
    fn ensure_vars(&mut self, count: u32) {
        while self.num_vars() < count {
            self.new_var();
        }
    }

    fn add_clause(&mut self, clause: &[Lit]) -> bool {
        Solver::add_clause(self, clause)
    }

    fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        Solver::solve(self, assumptions)
    }

    fn stats(&self) -> SolverStats {
        self.stats
    }
}

/// Luby restart sequence scaled by powers of `y`.
fn luby(y: f64, mut x: u32) -> f64 {
    let mut size = 1u32;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

/// True iff every clause of `cnf` has a literal that is true under `model`.
pub fn verify_model(cnf: &Cnf, model: &[bool]) -> bool {
    model.len() >= cnf.var_count() as usize && cnf.clauses().iter().all(|c| c.iter().any(|l| l.eval(model)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: i64) -> Lit {
        Lit::from_dimacs(v).unwrap()
    }

    fn clause(vs: &[i64]) -> Vec<Lit> {
        vs.iter().map(|&v| lit(v)).collect()
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<f64> = (0..15).map(|i| luby(2.0, i)).collect();
        assert_eq!(seq, [1., 1., 2., 1., 1., 2., 4., 1., 1., 2., 1., 1., 2., 4., 8.]);
    }

    #[test]
    fn contradictory_units() {
        let mut s = Solver::default();
        assert!(s.add_clause(&clause(&[1])));
        assert!(!s.add_clause(&clause(&[-1])));
        assert!(!s.is_ok());
        assert_eq!(s.solve(&[]), SolveResult::Unsat(vec![]));
        assert_eq!(s.solve(&[lit(2)]), SolveResult::Unsat(vec![]));
    }

    #[test]
    fn simple_sat() {
        let mut s = Solver::default();
        s.add_clause(&clause(&[1, 2]));
        assert!(s.solve(&[]).is_sat());
    }

    #[test]
    fn assumptions_core_and_model() {
        let mut s = Solver::default();
        s.add_clause(&clause(&[1, 2]));
        match s.solve(&[lit(-1), lit(-2)]) {
            SolveResult::Unsat(core) => {
                assert!(!core.is_empty());
                assert!(core.iter().all(|l| [lit(-1), lit(-2)].contains(l)));
            }
            other => panic!("expected UNSAT, got {other:?}"),
        }
        match s.solve(&[lit(-1)]) {
            SolveResult::Sat(model) => {
                assert!(!model[0]);
                assert!(model[1]);
            }
            other => panic!("expected SAT, got {other:?}"),
        }
        assert!(s.is_ok());
    }

    #[test]
    fn core_excludes_irrelevant_assumptions() {
        let mut s = Solver::default();
        s.add_clause(&clause(&[-1, 2]));
        s.add_clause(&clause(&[-2, 3]));
        match s.solve(&[lit(4), lit(1), lit(5), lit(-3)]) {
            SolveResult::Unsat(core) => {
                let mut core = core;
                core.sort();
                let mut expected = vec![lit(1), lit(-3)];
                expected.sort();
                assert_eq!(core, expected);
            }
            other => panic!("expected UNSAT, got {other:?}"),
        }
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes.
        let (p, h) = (5i64, 4i64);
        let var = |i: i64, j: i64| i * h + j + 1;
        let mut s = Solver::default();
        for i in 0..p {
            s.add_clause(&(0..h).map(|j| lit(var(i, j))).collect::<Vec<_>>());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    s.add_clause(&[lit(-var(a, j)), lit(-var(b, j))]);
                }
            }
        }
        assert_eq!(s.solve(&[]), SolveResult::Unsat(vec![]));
        assert!(s.stats().conflicts > 0);
    }

    #[test]
    fn verify_model_units() {
        let mut cnf = Cnf::new(1);
        cnf.add_clause(vec![Var(0).pos()]);
        assert!(verify_model(&cnf, &[true]));
        assert!(!verify_model(&cnf, &[false]));
    }

    #[test]
    fn enumerates_all_models_with_blocking() {
        // (x1 v x2) over three variables has 6 models.
        let mut s = Solver::default();
        s.add_clause(&clause(&[1, 2]));
        s.ensure_vars(3);
        let mut count = 0;
        while let SolveResult::Sat(model) = s.solve(&[]) {
            count += 1;
            let block: Vec<Lit> = (0..3).map(|v| Var(v).lit(!model[v as usize])).collect();
            s.add_clause(&block);
        }
        assert_eq!(count, 6);
    }
}
