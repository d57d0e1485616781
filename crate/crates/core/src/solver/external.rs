//! Bridge to an external DIMACS solver, used for differential testing.
//!
//! The formula (plus assumptions as unit clauses) is written to a temporary DIMACS file,
//! the solver is run with that path as its last argument, and the standard
//! `s SATISFIABLE` / `v ...` output is parsed back.

use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::cnf::{Cnf, Lit};
use crate::error::{Error, Result};

use super::{SatBackend, SolveResult, SolverStats};

static FILE_COUNTER: AtomicU64 = AtomicU64::new(0);

pub struct ExternalSolver {
    program: PathBuf,
    args: Vec<String>,
    cnf: Cnf,
    unsat: bool,
    stats: SolverStats,
}

impl ExternalSolver {
    pub fn new(program: impl Into<PathBuf>, args: Vec<String>) -> Self {
        ExternalSolver { program: program.into(), args, cnf: Cnf::new(0), unsat: false, stats: SolverStats::default() }
    }

    /// Runs the external program once. `Ok(None)` means UNSAT.
    pub fn run(&self, cnf: &Cnf, assumptions: &[Lit]) -> Result<Option<Vec<bool>>> {
        let mut formula = cnf.clone();
        for &a in assumptions {
            formula.add_clause(vec![a]);
        }
        let path = std::env::temp_dir().join(format!(
            "seqsat-{}-{}.cnf",
            std::process::id(),
            FILE_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::write(&path, formula.to_dimacs_string())?;
        let output = Command::new(&self.program).args(&self.args).arg(&path).output();
        let _ = std::fs::remove_file(&path);
        let output = output.map_err(|e| Error::ExternalSolver(format!("{}: {e}", self.program.display())))?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        parse_solver_output(&stdout, formula.var_count())
    }
}

/// Parses competition-style solver output. Variables absent from the `v` lines are false.
pub fn parse_solver_output(text: &str, var_count: u32) -> Result<Option<Vec<bool>>> {
    let mut status = None;
    let mut model = vec![false; var_count as usize];
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => true,
                "UNSATISFIABLE" => false,
                other => return Err(Error::ExternalSolver(format!("unknown status {other:?}"))),
            });
        } else if let Some(rest) = line.strip_prefix('v') {
            for word in rest.split_whitespace() {
                let value: i64 = word.parse().map_err(|_| Error::ExternalSolver(format!("bad value {word:?}")))?;
                if value == 0 {
                    continue;
                }
                let lit =
                    Lit::from_dimacs(value).ok_or_else(|| Error::ExternalSolver(format!("bad literal {value}")))?;
                if let Some(slot) = model.get_mut(lit.var().index()) {
                    *slot = !lit.is_negated();
                }
            }
        }
    }
    match status {
        Some(true) => Ok(Some(model)),
        Some(false) => Ok(None),
        None => Err(Error::ExternalSolver("no status line in solver output".into())),
    }
}

impl SatBackend for ExternalSolver {
    fn ensure_vars(&mut self, count: u32) {
        if count > self.cnf.var_count() {
            let mut grown = Cnf::new(count);
            grown.extend(std::mem::take(&mut self.cnf));
            self.cnf = grown;
        }
    }

    fn add_clause(&mut self, clause: &[Lit]) -> bool {
        if clause.is_empty() {
            self.unsat = true;
            return false;
        }
        let top = clause.iter().map(|l| l.var().0 + 1).max().unwrap_or(0);
        self.ensure_vars(top);
        self.cnf.add_clause(clause.to_vec());
        !self.unsat
    }

    /// Panics if the external program cannot be run or produces unreadable output.
    fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.stats.solves += 1;
        if self.unsat {
            return SolveResult::Unsat(Vec::new());
        }
        match self.run(&self.cnf, assumptions).expect("external solver failed") {
            Some(model) => SolveResult::Sat(model),
            None => SolveResult::Unsat(assumptions.to_vec()),
        }
    }

    fn stats(&self) -> SolverStats {
        self.stats
    }
}
