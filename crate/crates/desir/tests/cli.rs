//! End-to-end runs of the binary on small fixture files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use desir_core::bernstein::{degree_raise, BernsteinPoly};
use desir_core::rational::{int, parse_rational};
use desir_core::Rational;
use num_traits::Zero;
use tempfile::TempDir;

const SWAP_ASSESSMENT: &str = r#"{
  "space": {"categories": ["b", "w"], "length": 2},
  "generators": [{"bb": "-3", "bw": "1", "wb": "1", "ww": "-3"}]
}"#;

const POLYNOMIAL: &str = r#"{"categories": ["b", "w"], "degree": 2,
  "coefficients": {"2,0": "-3", "1,1": "1", "0,2": "-3"}}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fixtures(files: &[(&str, &str)]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in files {
        fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

fn desir(dir: &Path, args: &[&str]) -> Run {
    desir_env(dir, args, None)
}

fn desir_env(dir: &Path, args: &[&str], cap: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_desir"));
    cmd.current_dir(dir).args(args).env_remove("DESIR_CAP");
    if let Some(cap) = cap {
        cmd.env("DESIR_CAP", cap);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Values of a `key=value ...` line.
fn keyed_values(line: &str) -> Vec<Rational> {
    line.split_whitespace()
        .map(|kv| parse_rational(kv.split_once('=').unwrap().1).unwrap())
        .collect()
}

#[test]
fn check_under_exchangeability() {
    let dir = fixtures(&[("a.json", SWAP_ASSESSMENT)]);
    let run = desir(dir.path(), &["check", "--exchangeable", "a.json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout, "avoids non-positivity under exchangeability: true\n");
}

#[test]
fn failed_check_prints_a_verifiable_witness() {
    let a = r#"{"space": {"size": 2}, "generators": [{"0": "-1", "1": "1"}, {"0": "1", "1": "-2"}]}"#;
    let dir = fixtures(&[("a.json", a)]);
    let run = desir(dir.path(), &["check", "a.json"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.starts_with("avoids non-positivity: false\n"));
    let combination = run.stdout.lines().find_map(|l| l.trim().strip_prefix("combination: ")).unwrap();
    assert!(keyed_values(combination).iter().all(|v| *v <= Rational::zero()));
}

#[test]
fn raise_prints_the_exact_coefficients() {
    let dir = fixtures(&[("p.json", POLYNOMIAL)]);
    let run = desir(dir.path(), &["bernstein", "raise", "p.json", "--to", "3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let first = run.stdout.lines().next().unwrap();
    assert_eq!(first, "degree 3: (-3, -1/3, -1/3, -3)");

    // the printed values parse back to what the library computes
    let p = BernsteinPoly::from_values(["b", "w"], 2, vec![int(-3), int(1), int(-3)]).unwrap();
    let expected = degree_raise(&p, 3).unwrap();
    let printed: Vec<Rational> = first
        .trim_start_matches("degree 3: (")
        .trim_end_matches(')')
        .split(", ")
        .map(|t| parse_rational(t).unwrap())
        .collect();
    assert_eq!(printed, expected.coefficients().values());
}

#[test]
fn lower_prevision_of_a_constant() {
    let dir = fixtures(&[
        ("a.json", SWAP_ASSESSMENT),
        ("five.json", r#"{"bb": "5", "bw": "5", "wb": "5", "ww": "5"}"#),
    ]);
    let run = desir(dir.path(), &["lpr", "a.json", "five.json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout.lines().next(), Some("5"));
    let upper = desir(dir.path(), &["lpr", "--upper", "--exchangeable", "a.json", "five.json"]);
    assert_eq!(upper.stdout.lines().next(), Some("5"));
}

#[test]
fn finite_extension_failure() {
    let dir = fixtures(&[("a.json", SWAP_ASSESSMENT)]);
    let run = desir(dir.path(), &["extend-finite", "a.json", "--by", "1"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.starts_with("not-extendable"));
    let image = run.stdout.lines().find_map(|l| l.trim().strip_prefix("on sequences: ")).unwrap();
    let values = keyed_values(image);
    assert_eq!(values.len(), 8);
    assert!(values.iter().all(|v| *v <= Rational::zero()));
}

#[test]
fn infinite_extension_and_the_cap() {
    let dir = fixtures(&[("a.json", SWAP_ASSESSMENT)]);
    let run = desir(dir.path(), &["extend-infinite", "a.json"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.starts_with("not-extendable: non-positive at degree 3"));
    let capped = desir_env(dir.path(), &["extend-infinite", "a.json"], Some("2"));
    assert_eq!(capped.stdout, "undecided up to degree 2\n");
    let flag = desir_env(dir.path(), &["--cap", "2", "extend-infinite", "a.json"], Some("40"));
    assert_eq!(flag.stdout, "undecided up to degree 2\n");
}

#[test]
fn updating_on_a_sample() {
    let dir = fixtures(&[
        ("e.json", r#"{"space": {"categories": ["b", "w"], "length": 3}, "lineality": "exchangeable"}"#),
        (
            "f.json",
            r#"{"space": {"categories": ["b", "w"], "length": 1}, "values": {"b": "1", "w": "-1"}}"#,
        ),
        (
            "g.json",
            r#"{"space": {"categories": ["b", "w"], "total": 1}, "values": {"1,0": "1", "0,1": "1/2"}}"#,
        ),
    ]);
    let run = desir(dir.path(), &["update", "e.json", "f.json", "--sample", "bw"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout, "updated member: no\n");
    let run = desir(dir.path(), &["update", "e.json", "g.json", "--counts", "1,1"]);
    assert_eq!(run.stdout, "updated member: yes\n");
}

#[test]
fn incoherent_models_exit_with_two() {
    let a = r#"{"space": {"size": 2}, "generators": [{"0": "-1", "1": "0"}]}"#;
    let dir = fixtures(&[("a.json", a), ("f.json", r#"{"0": "1", "1": "1"}"#)]);
    let run = desir(dir.path(), &["member", "a.json", "f.json"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("non-positivity"));
    assert!(run.stderr.contains("combination: 0=-1 1=0"), "{}", run.stderr);
}

#[test]
fn schema_errors_exit_with_one_and_name_the_field() {
    let dir = fixtures(&[
        ("a.json", SWAP_ASSESSMENT),
        ("short.json", r#"{"bb": "1", "bw": "1", "wb": "1"}"#),
        ("extra.json", r#"{"space": {"categories": ["b"], "length": 1}, "values": {"b": "1"}, "weight": 2}"#),
        ("bad.json", r#"{"bb": "1/0", "bw": "1", "wb": "1", "ww": "1"}"#),
    ]);
    let run = desir(dir.path(), &["member", "a.json", "short.json"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("missing value for key \"ww\""), "{}", run.stderr);
    let run = desir(dir.path(), &["bernstein", "expand", "extra.json"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("gamble.weight"), "{}", run.stderr);
    let run = desir(dir.path(), &["member", "a.json", "bad.json"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("gamble[\"bb\"]"), "{}", run.stderr);
    let run = desir(dir.path(), &["check", "missing.json"]);
    assert_eq!(run.code, 1);
}

fn script_dir() -> (TempDir, PathBuf) {
    let script = r#"{
      "space": {"categories": ["b", "w"], "length": 2},
      "model": {"assessment": "a.json", "lineality": "exchangeable"},
      "queries": [
        {"op": "check"},
        {"op": "lpr", "gamble": {"bb": "1", "bw": "0", "wb": "0", "ww": "1"}},
        {"op": "member", "gamble": {"bb": "1", "bw": "0", "wb": "0", "ww": "0"}},
        {"op": "bernstein-raise", "polynomial": "p.json", "to": 3},
        {"op": "extend-finite", "by": 1}
      ]
    }"#;
    let dir = fixtures(&[("a.json", SWAP_ASSESSMENT), ("p.json", POLYNOMIAL), ("script.json", script)]);
    let path = dir.path().join("script.json");
    (dir, path)
}

#[test]
fn script_reports_each_query() {
    let (dir, path) = script_dir();
    // run from elsewhere: operand paths resolve against the script
    let run = desir(Path::new("/"), &["run", path.to_str().unwrap()]);
    assert_eq!(run.code, 2, "{}", run.stderr);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines[0], "[1] check");
    assert_eq!(lines[1], "  avoids non-positivity under exchangeability: true");
    assert_eq!(lines[2], "[2] lpr");
    assert!(lines.contains(&"  degree 3: (-3, -1/3, -1/3, -3)"));
    let at = lines.iter().position(|l| *l == "[5] extend-finite").unwrap();
    assert!(lines[at + 1].starts_with("  not-extendable"));
    drop(dir);
}

#[test]
fn scripts_on_the_vacuous_model() {
    let script = r#"{
      "space": {"size": 2},
      "queries": [
        {"op": "member", "gamble": {"0": "1", "1": "2"}},
        {"op": "lpr", "gamble": {"0": "1", "1": "3"}}
      ]
    }"#;
    let dir = fixtures(&[("s.json", script)]);
    let run = desir(dir.path(), &["--quiet", "run", "s.json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout, "[1] member\n  member: yes\n[2] lpr\n  1\n");
}

#[test]
fn script_schema_errors() {
    let script = r#"{"space": {"size": 2}, "queries": [{"op": "lpr", "gambel": {"0": "1", "1": "3"}}]}"#;
    let dir = fixtures(&[("s.json", script)]);
    let run = desir(dir.path(), &["run", "s.json"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("queries[0].gambel"), "{}", run.stderr);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (dir, path) = script_dir();
    let path = path.to_str().unwrap();
    let first = desir(dir.path(), &["--decimal", "run", path]);
    for _ in 0..3 {
        let again = desir(dir.path(), &["--decimal", "run", path]);
        assert_eq!(again.stdout.as_bytes(), first.stdout.as_bytes());
        assert_eq!(again.code, first.code);
    }
    assert!(first.stdout.contains("-1/3 [~-0.333333]"));
}
