//! Frequent flexible-sequence mining by reduction to propositional satisfiability.
//!
//! A dataset of token sequences and a support threshold are encoded as CNF (pattern
//! characters, covered transactions and supporting positions as variables), solved with the
//! built-in incremental CDCL solver, and enumerated as all, closed or maximal frequent
//! patterns. Gap, dependent-gap, span and regular-expression constraints are extra clause
//! families on the same formula. The [`oracle`] module is an independent brute-force miner
//! used to check every result.
//!
//! ```
//! use seqsat_core::{mine, Dataset, MiningConfig, Mode};
//!
//! let data = Dataset::from_chars(&["ACCBAB", "AB"]).unwrap();
//! let config = MiningConfig::new(2, Mode::All).with_max_gap(2);
//! let patterns = mine(&data, &config).unwrap();
//! assert!(patterns.contains(&data.parse_pattern("A B").unwrap()));
//! ```

pub mod cnf;
pub mod dataset;
pub mod encoder;
pub mod enumerator;
pub mod error;
pub mod oracle;
pub mod solver;
pub mod synth;

pub use cnf::{Cnf, Embedding, Lit, Pattern, Var, VarMap};
pub use dataset::{resolve_minsup, Dataset, DatasetStats, Format, GapTable, MiningConfig, Mode};
pub use encoder::{encode, Dfa, Encoding};
pub use enumerator::{
    mine, mine_all, mine_closed, mine_maximal, mine_with, mine_with_backend, MinerOptions, MiningStats, PatternSet,
};
pub use error::{Error, Result};
pub use oracle::oracle_mine;
pub use solver::{verify_model, SatBackend, SolveResult, Solver, SolverConfig, SolverStats};
