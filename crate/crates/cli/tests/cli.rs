use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use seqsat_core::{synth, Format};
use tempfile::TempDir;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_seqsat")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mine_fig1_all() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "fig1.txt", "B A C B\nA C C B\n");
    let out = run(&["mine", "-i", s(&input), "--minsup", "2", "--mode", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert!(lines.contains(&"A B\t2".to_string()));
    assert_eq!(lines.len(), 7);
    let report: serde_json::Value = serde_json::from_str(stderr(&out).trim()).unwrap();
    assert_eq!(report["patterns"], 7);
    assert!(report["total_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn mine_gap_example_with_witness() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "gapex.txt", "A C C B A B\nA B\n");
    let out = run(&["mine", "-i", s(&input), "--minsup", "2", "--max-gap", "2", "--witness"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l.starts_with("A B\t2\t")), "{}", stdout(&out));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", "A\nB\n");
    let zero = run(&["mine", "-i", s(&input), "--minsup", "0"]);
    assert_eq!(zero.status.code(), Some(2));
    assert!(stderr(&zero).contains("out of range"));
    let none = run(&["mine", "-i", s(&input), "--minsup", "2"]);
    assert_eq!(none.status.code(), Some(1));
    assert!(stdout(&none).is_empty());
    assert_eq!(run(&["mine", "--minsup", "2"]).status.code(), Some(2));
    assert_eq!(run(&["mine", "-i", s(&input), "--minsup", "2", "--mode", "some"]).status.code(), Some(2));
    assert_eq!(run(&["mine", "-i", "/nonexistent/file", "--minsup", "1"]).status.code(), Some(2));
    let eps = write(&dir, "eps.txt", "A ε B\n");
    let reserved = run(&["mine", "-i", s(&eps), "--minsup", "1"]);
    assert_eq!(reserved.status.code(), Some(2));
}

#[test]
fn percent_minsup_rounds_up() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", "A B\nA\nA\nB\n");
    // 30% of 4 is 1.2, rounded up to 2: B (support 2) qualifies, "A B" (support 1) does not.
    let out = run(&["mine", "-i", s(&input), "--minsup", "30%", "--mode", "all"]);
    let text = stdout(&out);
    assert!(text.contains("B\t2"));
    assert!(!text.contains("A B"));
}

#[test]
fn spmf_input_and_json_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.spmf", "1 -1 2 -1 -2\n1 -1 3 -1 2 -1 -2\n");
    let json_path = dir.path().join("out.json");
    let out = run(&[
        "mine",
        "-i",
        s(&input),
        "--format",
        "spmf",
        "--minsup",
        "2",
        "--mode",
        "all",
        "--json",
        "-o",
        s(&json_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    let patterns = doc["patterns"].as_array().unwrap();
    assert_eq!(doc["report"]["patterns"].as_u64().unwrap() as usize, patterns.len());
    assert!(patterns
        .iter()
        .any(|p| p["pattern"] == "1 2" && p["support"] == 2 && p["cover"] == serde_json::json!([1, 2])));
}

#[test]
fn dependent_gap_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", "A C C B A B\nC A B\n");
    let rows = "position,token,maxgap\n1,A,1\n1,B,1\n1,C,1\n2,A,5\n2,B,5\n2,C,5\n";
    let table = write(&dir, "gaps.csv", rows);
    let plain = run(&["mine", "-i", s(&input), "--minsup", "2", "--mode", "all"]);
    assert!(stdout(&plain).lines().any(|l| l == "C B\t2"));
    let out = run(&["mine", "-i", s(&input), "--minsup", "2", "--mode", "all", "--dep-gap", s(&table)]);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "A B\t2"), "{text}");
    assert!(!text.lines().any(|l| l.starts_with("C B")), "{text}");
    let partial = write(&dir, "partial.csv", "1,A,1\n");
    let out = run(&["mine", "-i", s(&input), "--minsup", "2", "--dep-gap", s(&partial)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_for_a_seed() {
    let dir = TempDir::new().unwrap();
    let data = synth::random_dataset(11, (10, 20), (3, 4), (3, 10));
    let input = write(&dir, "r.txt", &data.render(Format::Tokens).unwrap());
    let args = ["mine", "-i", s(&input), "--minsup", "3", "--mode", "all", "--seed", "9", "--random-freq", "0.1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_agrees_on_random_data() {
    let dir = TempDir::new().unwrap();
    let data = synth::random_dataset(7, (5, 30), (2, 5), (1, 12));
    let input = write(&dir, "random_seed7.txt", &data.render(Format::Tokens).unwrap());
    for extra in [vec!["--max-gap", "3", "--mode", "closed"], vec!["--max-span", "4", "--mode", "maximal"], vec![]] {
        let mut args = vec!["verify", "-i", s(&input), "--minsup", "2"];
        args.extend(extra);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).starts_with("identical"));
    }
}

#[cfg(unix)]
fn fake_solver(dir: &TempDir, body: &str) -> PathBuf {
    use std::os::unix::fs::PermissionsExt;
    let path = write(dir, "fake-solver.sh", &format!("#!/bin/sh\n{body}\n"));
    fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).unwrap();
    path
}

#[cfg(unix)]
#[test]
fn verify_reports_smallest_counterexample() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", "A B\nA B C\n");
    let liar = fake_solver(&dir, "echo 's UNSATISFIABLE'");
    let out = run(&["verify", "-i", s(&input), "--minsup", "2", "--mode", "all", "--external-solver", s(&liar)]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.starts_with("mismatch:"), "{text}");
    assert!(text.contains("smallest: A\tsat=absent\toracle=2"), "{text}");
}

#[cfg(unix)]
#[test]
fn broken_external_solver_is_an_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", "A B\n");
    let silent = fake_solver(&dir, "true");
    let out = run(&["mine", "-i", s(&input), "--minsup", "1", "--external-solver", s(&silent)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn external_solver_matches_builtin() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", "A C C B A B\nA B\nC A B\n");
    for mode in ["all", "closed", "maximal"] {
        let builtin = run(&["mine", "-i", s(&input), "--minsup", "2", "--mode", mode]);
        let external = run(&[
            "mine",
            "-i",
            s(&input),
            "--minsup",
            "2",
            "--mode",
            mode,
            "--external-solver",
            bin(),
            "--external-arg",
            "sat",
        ]);
        assert_eq!(external.status.code(), Some(0), "{}", stderr(&external));
        let sorted = |o: &Output| {
            let mut lines: Vec<String> = stdout(o).lines().map(String::from).collect();
            lines.sort();
            lines
        };
        assert_eq!(sorted(&external), sorted(&builtin), "mode {mode}");
    }
}

#[test]
fn encode_solve_decode_bridge() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", "A C C B A B\nA B\nC A B\n");
    let cnf = dir.path().join("f.cnf");
    let out = run(&["encode", "-i", s(&input), "--minsup", "2", "--max-gap", "2", "-o", s(&cnf)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let varmap = dir.path().join("f.cnf.varmap.json");
    assert!(varmap.exists());
    let header = fs::read_to_string(&cnf).unwrap();
    assert!(header.lines().any(|l| l.starts_with("p cnf ")));

    let solved = run(&["sat", s(&cnf)]);
    assert_eq!(solved.status.code(), Some(10));
    let model = write(&dir, "model.txt", &stdout(&solved));
    let decoded = run(&["decode", "--varmap", s(&varmap), "--model", s(&model)]);
    assert_eq!(decoded.status.code(), Some(0), "{}", stderr(&decoded));
    let line = stdout(&decoded);
    let (pattern, cover) = line.trim_end().split_once('\t').unwrap();
    assert!(cover.split(' ').count() >= 2);

    let all = run(&["mine", "-i", s(&input), "--minsup", "2", "--max-gap", "2", "--mode", "all"]);
    let frequent: Vec<String> = stdout(&all).lines().map(|l| l.split('\t').next().unwrap().to_string()).collect();
    assert!(frequent.contains(&pattern.to_string()), "{pattern} not in {frequent:?}");
}

#[test]
fn sat_reports_unsat() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = run(&["sat", s(&cnf)]);
    assert_eq!(out.status.code(), Some(20));
    assert_eq!(stdout(&out).trim(), "s UNSATISFIABLE");
}

#[test]
fn oracle_matches_mine() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "fig1.txt", "B A C B\nA C C B\n");
    let mine = run(&["mine", "-i", s(&input), "--minsup", "2", "--mode", "closed"]);
    let oracle = run(&["oracle", "-i", s(&input), "--minsup", "2", "--mode", "closed"]);
    assert_eq!(oracle.status.code(), Some(0));
    assert_eq!(stdout(&oracle).trim(), "A C B\t2");
    assert_eq!(stdout(&mine).trim(), "A C B\t2");
}

#[test]
fn bench_grid_rows() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "fig1.txt", "B A C B\nA C C B\n");
    let csv_path = dir.path().join("bench.csv");
    let out = run(&["bench", "-i", s(&input), "--minsup", "1", "--grid", "gaps=1,2,4,8", "-o", s(&csv_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "conflicts"));
    let gap_col = headers.iter().position(|h| h == "max_gap").unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().map(|r| r[gap_col].to_string()).collect::<Vec<_>>(), ["1", "2", "4", "8"]);
}
