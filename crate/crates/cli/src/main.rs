//! `seqsat`: mine frequent token sequences with a SAT solver.

mod grid;

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufReader, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use seqsat_core::oracle::{oracle_mine_with_budget, DEFAULT_BUDGET};
use seqsat_core::solver::external::ExternalSolver;
use seqsat_core::{
    encode, mine_with, mine_with_backend, resolve_minsup, Cnf, Dataset, DatasetStats, Format, GapTable, MinerOptions,
    MiningConfig, Mode, Pattern, PatternSet, SolveResult, Solver, SolverConfig,
};

use grid::Grid;

#[derive(Parser)]
#[command(name = "seqsat", version, about = "Frequent sequence mining by reduction to SAT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine frequent patterns with the SAT encoding.
    Mine(MineArgs),
    /// Mine with the brute-force reference miner.
    Oracle(OracleArgs),
    /// Run both miners and compare their outputs (exit 3 on mismatch).
    Verify(VerifyArgs),
    /// Write the CNF encoding as DIMACS, plus a JSON variable map.
    Encode(EncodeArgs),
    /// Decode a solver model of an encoded formula into a pattern.
    Decode(DecodeArgs),
    /// Mine over a grid of configurations and write one CSV row per cell.
    Bench(BenchArgs),
    /// Solve a DIMACS file with the built-in solver (exit 10 SAT, 20 UNSAT).
    Sat(SatArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Dataset file.
    #[arg(short, long)]
    input: PathBuf,
    /// Dataset format: `tokens` (one whitespace-separated sequence per line) or `spmf`.
    #[arg(long, default_value = "tokens")]
    format: Format,
    /// Minimum support: an absolute count, or a percentage such as `5%` (rounded up).
    #[arg(long)]
    minsup: String,
    /// all, closed or maximal.
    #[arg(long, default_value = "closed")]
    mode: Mode,
    /// Largest distance between consecutive embedding positions.
    #[arg(long)]
    max_gap: Option<usize>,
    /// CSV file of `position,token,maxgap` rows giving per-position gap limits.
    #[arg(long)]
    dep_gap: Option<PathBuf>,
    /// Largest distance between the first and last embedding positions.
    #[arg(long)]
    max_span: Option<usize>,
    /// Regular expression over tokens that every pattern must match. `*` matches any
    /// token sequence, `.` any single token, `|` and parentheses as usual.
    #[arg(long)]
    regex: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write patterns here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write a JSON document (patterns and run report) instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Report one embedding per covered transaction.
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct SolverArgs {
    /// Solver seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Probability of a random branching decision.
    #[arg(long, default_value_t = 0.0)]
    random_freq: f64,
    /// Solve through an external DIMACS solver instead of the built-in one.
    #[arg(long)]
    external_solver: Option<PathBuf>,
    /// Extra argument for the external solver (repeatable); the CNF path is passed last.
    #[arg(long = "external-arg", allow_hyphen_values = true)]
    external_args: Vec<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Node budget of the reference miner.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Node budget of the reference miner.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    data: DataArgs,
    /// DIMACS output path.
    #[arg(short, long)]
    output: PathBuf,
    /// Variable map path (default: the output path with `.varmap.json` appended).
    #[arg(long)]
    varmap: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Variable map written by `encode`.
    #[arg(long)]
    varmap: PathBuf,
    /// Solver output with `s` and `v` lines.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Grid axes, e.g. `gaps=1,2,4,8` or `gaps=none,2;spans=3,5`. Axes: gaps, spans,
    /// minsups, modes. Repeatable; omitted axes take the value of the matching flag.
    #[arg(long)]
    grid: Vec<String>,
    /// CSV output path (default: standard output).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SatArgs {
    /// DIMACS CNF file.
    file: PathBuf,
    /// Solver seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(args) => cmd_mine(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Sat(args) => cmd_sat(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(args: &DataArgs) -> Result<(Dataset, MiningConfig)> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let name = args.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let dataset = Dataset::parse(&text, args.format)?.with_name(name);
    let minsup = resolve_minsup(&args.minsup, dataset.len())?;
    let mut config = MiningConfig::new(minsup, args.mode);
    config.max_gap = args.max_gap;
    config.max_span = args.max_span;
    config.regex = args.regex.clone();
    if let Some(path) = &args.dep_gap {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        config.dep_gap = Some(GapTable::parse_csv(&text, &dataset)?);
    }
    config.validate(&dataset)?;
    Ok((dataset, config))
}

#[derive(Serialize)]
struct RunReport<'a> {
    config: &'a MiningConfig,
    dataset: DatasetStats,
    k: usize,
    patterns: usize,
    solver_calls: u64,
    conflicts: u64,
    variables: u64,
    clauses: u64,
    encode_secs: f64,
    solve_secs: f64,
    total_secs: f64,
}

impl<'a> RunReport<'a> {
    fn new(dataset: &Dataset, set: &'a PatternSet) -> Self {
        let s = set.stats;
        RunReport {
            config: &set.config,
            dataset: dataset.stats(),
            k: set.k,
            patterns: set.len(),
            solver_calls: s.solver_calls,
            conflicts: s.conflicts,
            variables: s.variables,
            clauses: s.clauses,
            encode_secs: s.encode_secs,
            solve_secs: s.solve_secs,
            total_secs: s.total_secs,
        }
    }
}

fn pattern_line(dataset: &Dataset, p: &Pattern) -> String {
    let mut line = format!("{}\t{}", dataset.display_pattern(&p.chars), p.support);
    if let Some(witness) = &p.witness {
        let items: Vec<String> = witness
            .iter()
            .map(|e| {
                let pos: Vec<String> = e.positions.iter().map(usize::to_string).collect();
                format!("{}:{}", e.transaction, pos.join(","))
            })
            .collect();
        line.push('\t');
        line.push_str(&items.join(" "));
    }
    line
}

fn pattern_json(dataset: &Dataset, p: &Pattern) -> serde_json::Value {
    json!({
        "pattern": dataset.display_pattern(&p.chars),
        "support": p.support,
        "cover": p.cover,
        "witness": p.witness,
    })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?))
        }
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

/// Writes patterns (text or JSON) and the run report, returning exit code 0 or 1.
fn emit(dataset: &Dataset, set: &PatternSet, out: &OutputArgs) -> Result<u8> {
    let report = RunReport::new(dataset, set);
    let mut sink = open_output(out.output.as_deref())?;
    if out.json {
        let patterns: Vec<_> = set.patterns.iter().map(|p| pattern_json(dataset, p)).collect();
        serde_json::to_writer_pretty(&mut sink, &json!({ "report": report, "patterns": patterns }))?;
        writeln!(sink)?;
    } else {
        for p in &set.patterns {
            writeln!(sink, "{}", pattern_line(dataset, p))?;
        }
        eprintln!("{}", serde_json::to_string(&report)?);
    }
    sink.flush()?;
    Ok(if set.is_empty() { 1 } else { 0 })
}

fn run_sat_miner(dataset: &Dataset, config: &MiningConfig, args: &SolverArgs, witnesses: bool) -> Result<PatternSet> {
    let solver = SolverConfig { seed: args.seed, random_var_freq: args.random_freq, ..SolverConfig::default() };
    let options = MinerOptions { solver, witnesses, ..MinerOptions::default() };
    Ok(match &args.external_solver {
        None => mine_with(dataset, config, options)?,
        Some(program) => {
            let backend = ExternalSolver::new(program, args.external_args.clone());
            panic::catch_unwind(AssertUnwindSafe(|| mine_with_backend(dataset, config, options, backend)))
                .map_err(|_| anyhow::anyhow!("external solver {} failed", program.display()))??
        }
    })
}

fn cmd_mine(args: MineArgs) -> Result<u8> {
    let (dataset, config) = load(&args.data)?;
    let set = run_sat_miner(&dataset, &config, &args.solver, args.witness)?;
    emit(&dataset, &set, &args.out)
}

fn cmd_oracle(args: OracleArgs) -> Result<u8> {
    let (dataset, config) = load(&args.data)?;
    let set = oracle_mine_with_budget(&dataset, &config, args.budget)?;
    emit(&dataset, &set, &args.out)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let (dataset, config) = load(&args.data)?;
    let sat = run_sat_miner(&dataset, &config, &args.solver, false)?.supports();
    let oracle = oracle_mine_with_budget(&dataset, &config, args.budget)?.supports();
    let differing: BTreeSet<(usize, &Vec<u32>)> =
        sat.keys().chain(oracle.keys()).filter(|p| sat.get(*p) != oracle.get(*p)).map(|p| (p.len(), p)).collect();
    let show = |s: Option<&usize>| s.map_or("absent".to_string(), usize::to_string);
    match differing.first().map(|&(_, p)| p) {
        None => {
            println!("identical: {} patterns", sat.len());
            Ok(0)
        }
        Some(p) => {
            println!(
                "mismatch: {} patterns differ; smallest: {}\tsat={}\toracle={}",
                differing.len(),
                dataset.display_pattern(p),
                show(sat.get(p)),
                show(oracle.get(p))
            );
            Ok(3)
        }
    }
}

fn cmd_encode(args: EncodeArgs) -> Result<u8> {
    let (dataset, config) = load(&args.data)?;
    let encoding = encode(&dataset, &config)?;
    let file = fs::File::create(&args.output).with_context(|| format!("creating {}", args.output.display()))?;
    encoding.cnf.write_dimacs(io::BufWriter::new(file))?;
    let varmap_path = args.varmap.unwrap_or_else(|| {
        let mut name = args.output.clone().into_os_string();
        name.push(".varmap.json");
        PathBuf::from(name)
    });
    let sidecar = json!({
        "k": encoding.k,
        "minsup": config.minsup,
        "mode": config.mode,
        "vocabulary": dataset.vocabulary(),
        "transactions": dataset.len(),
        "variables": encoding.varmap.total_vars(),
        "clauses": encoding.cnf.len(),
        "vars": encoding.varmap.to_json(&dataset),
    });
    fs::write(&varmap_path, serde_json::to_string_pretty(&sidecar)?)
        .with_context(|| format!("writing {}", varmap_path.display()))?;
    eprintln!(
        "wrote {} ({} variables, {} clauses) and {}",
        args.output.display(),
        encoding.varmap.total_vars(),
        encoding.cnf.len(),
        varmap_path.display()
    );
    Ok(0)
}

/// Reads the pattern and the covered transactions out of a model, using the names in the
/// variable map: `m_<position>_<token>` and `c_<transaction>`.
fn cmd_decode(args: DecodeArgs) -> Result<u8> {
    let sidecar: serde_json::Value = serde_json::from_str(&fs::read_to_string(&args.varmap)?)?;
    let vars = sidecar["vars"].as_object().context("variable map has no `vars` object")?;
    let k = sidecar["k"].as_u64().context("variable map has no `k`")? as usize;
    let transactions = sidecar["transactions"].as_u64().context("variable map has no `transactions`")? as usize;
    let vocabulary: Vec<String> = serde_json::from_value(sidecar["vocabulary"].clone())?;
    let count = sidecar["variables"].as_u64().context("variable map has no `variables`")? as u32;
    let text = fs::read_to_string(&args.model)?;
    let Some(model) = seqsat_core::solver::external::parse_solver_output(&text, count)? else {
        println!("UNSAT");
        return Ok(1);
    };
    let value = |name: &str| -> Result<bool> {
        let id = vars.get(name).and_then(|v| v.as_u64()).with_context(|| format!("no variable {name}"))?;
        Ok(model[id as usize - 1])
    };
    let mut tokens = Vec::new();
    for position in 1..=k {
        let mut chosen = None;
        for token in vocabulary.iter().map(String::as_str).chain(["ε"]) {
            if value(&format!("m_{position}_{token}"))? {
                if chosen.is_some() {
                    bail!("position {position} holds more than one token");
                }
                chosen = Some(token);
            }
        }
        match chosen {
            Some("ε") => {}
            Some(t) => tokens.push(t),
            None => bail!("position {position} holds no token"),
        }
    }
    let mut cover = Vec::new();
    for i in 1..=transactions {
        if value(&format!("c_{i}"))? {
            cover.push(i.to_string());
        }
    }
    println!("{}\t{}", tokens.join(" "), cover.join(" "));
    Ok(0)
}

#[derive(Serialize)]
struct BenchRow {
    dataset: String,
    minsup: usize,
    mode: Mode,
    max_gap: Option<usize>,
    max_span: Option<usize>,
    dep_gap: bool,
    regex: Option<String>,
    transactions: usize,
    vocab_size: usize,
    max_length: usize,
    avg_length: f64,
    k: usize,
    patterns: usize,
    solver_calls: u64,
    conflicts: u64,
    variables: u64,
    clauses: u64,
    encode_secs: f64,
    solve_secs: f64,
    total_secs: f64,
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let (dataset, base) = load(&args.data)?;
    let grid = Grid::parse(&args.grid, &base, dataset.len())?;
    let stats = dataset.stats();
    let mut writer = csv::Writer::from_writer(open_output(args.output.as_deref())?);
    for config in grid.configs(&base) {
        config.validate(&dataset)?;
        let set = mine_with(&dataset, &config, MinerOptions::default())?;
        let s = set.stats;
        writer.serialize(BenchRow {
            dataset: dataset.name().unwrap_or_default().to_string(),
            minsup: config.minsup,
            mode: config.mode,
            max_gap: config.max_gap,
            max_span: config.max_span,
            dep_gap: config.dep_gap.is_some(),
            regex: config.regex.clone(),
            transactions: stats.transaction_count,
            vocab_size: stats.vocab_size,
            max_length: stats.max_length,
            avg_length: stats.avg_length,
            k: set.k,
            patterns: set.len(),
            solver_calls: s.solver_calls,
            conflicts: s.conflicts,
            variables: s.variables,
            clauses: s.clauses,
            encode_secs: s.encode_secs,
            solve_secs: s.solve_secs,
            total_secs: s.total_secs,
        })?;
    }
    writer.flush()?;
    Ok(0)
}

fn cmd_sat(args: SatArgs) -> Result<u8> {
    let file = fs::File::open(&args.file).with_context(|| format!("opening {}", args.file.display()))?;
    let cnf = Cnf::parse_dimacs(BufReader::new(file))?;
    let mut solver = Solver::from_cnf(&cnf, SolverConfig { seed: args.seed, ..SolverConfig::default() });
    let out = io::stdout();
    let mut out = io::BufWriter::new(out.lock());
    match solver.solve(&[]) {
        SolveResult::Sat(model) => {
            writeln!(out, "s SATISFIABLE")?;
            let values: Vec<String> = model
                .iter()
                .take(cnf.var_count() as usize)
                .enumerate()
                .map(|(v, &b)| if b { (v + 1).to_string() } else { format!("-{}", v + 1) })
                .collect();
            for chunk in values.chunks(20) {
                writeln!(out, "v {}", chunk.join(" "))?;
            }
            writeln!(out, "v 0")?;
            out.flush()?;
            Ok(10)
        }
        SolveResult::Unsat(_) => {
            writeln!(out, "s UNSATISFIABLE")?;
            out.flush()?;
            Ok(20)
        }
    }
}
