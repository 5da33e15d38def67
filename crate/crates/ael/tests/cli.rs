use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ael(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ael"))
        .args(args)
        .output()
        .expect("run ael")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run_ok(args: &[&str]) -> String {
    let out = ael(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

#[test]
fn text_reports() {
    let dir = TempDir::new().unwrap();
    let xor = write(&dir, "demo_xor.kb", "sig: xor,1\np ^ L p ^ 1\n");
    let or = write(&dir, "demo_or.kb", "sig: or\nLp | q\n");
    let xor = xor.to_str().unwrap();
    assert_eq!(run_ok(&["count", xor]), "count 2\n");
    assert_eq!(
        run_ok(&["classify", or.to_str().unwrap()]),
        "clone V\nalgorithm fullset+poly-implication\n"
    );
    assert_eq!(
        run_ok(&["brave", xor, "--query", "p"]),
        "answer true\nwitness Lp=+\n"
    );
    assert_eq!(
        run_ok(&["cautious", xor, "--query", "p"]),
        "answer false\nwitness Lp=-\n"
    );
    assert_eq!(run_ok(&["exp", xor]), "answer true\nwitness Lp=-\n");
}

#[test]
fn vacuous_cautious_is_flagged() {
    let dir = TempDir::new().unwrap();
    let kb = write(&dir, "none.kb", "sig: and,not\nLp\n");
    let out = run_ok(&[
        "--format",
        "records",
        "cautious",
        kb.to_str().unwrap(),
        "--query",
        "q",
    ]);
    assert!(out.contains("answer\ttrue\nvacuous\ttrue\n"), "{out}");
}

fn without_timing(records: &str) -> Vec<&str> {
    records
        .lines()
        .filter(|l| !l.starts_with("elapsed_ms\t"))
        .collect()
}

#[test]
fn records_are_stable_across_jobs() {
    let dir = TempDir::new().unwrap();
    let kb = write(
        &dir,
        "mixed.kb",
        "sig: or,not\nLp | q\n~Lq | L(p | Lq)\nLr | ~Lr\nLs | ~Lp\n",
    );
    let kb = kb.to_str().unwrap();
    for task in [
        &["list", kb][..],
        &["count", kb],
        &["exp", kb],
        &["brave", kb, "--query", "p"],
    ] {
        let base = run_ok(&[&["--format", "records", "--jobs", "1"][..], task].concat());
        assert!(base.lines().last().unwrap().starts_with("elapsed_ms\t"));
        for jobs in ["2", "5"] {
            let other = run_ok(&[&["--format", "records", "--jobs", jobs][..], task].concat());
            assert_eq!(without_timing(&other), without_timing(&base), "{task:?}");
        }
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.kb", "sig: and\np | q\n");
    assert_eq!(
        ael(&["count", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );
    let missing = dir.path().join("missing.kb");
    assert_eq!(
        ael(&["count", missing.to_str().unwrap()]).status.code(),
        Some(1)
    );
    let wide = write(&dir, "wide.kb", "sig: and,not\nLa & Lb & ~Lc\n");
    let out = ael(&["count", "--cap", "2", wide.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // A negative answer is still a successful run.
    let none = write(&dir, "none.kb", "sig: and,not\nLp\n");
    let out = ael(&["exp", none.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "answer false\n");
}

#[test]
fn reductions_round_trip() {
    let dir = TempDir::new().unwrap();
    // (x1 ∨ x2) ∧ ¬x1 has one model.
    let cnf = write(&dir, "f.cnf", "c tiny\np cnf 2 2\n1 2 0\n-1 0\n");
    let kb = run_ok(&["reduce", "3sat", cnf.to_str().unwrap()]);
    let reduced = write(&dir, "f.kb", &kb);
    assert_eq!(run_ok(&["count", reduced.to_str().unwrap()]), "count 1\n");

    // ∃x ∀y (x ∧ y) ∨ (x ∧ ¬y) is valid.
    let q = write(&dir, "q.qd", "p dnf 2 2\ne 1 0\na 2 0\n1 2 0\n1 -2 0\n");
    let kb = run_ok(&["reduce", "qbf2", q.to_str().unwrap()]);
    let reduced = write(&dir, "q.kb", &kb);
    assert!(run_ok(&["exp", reduced.to_str().unwrap()]).starts_with("answer true\n"));

    let gamma = write(&dir, "g.kb", "sig: xor\np ^ q\nq\n");
    let kb = run_ok(&["reduce", "imp", gamma.to_str().unwrap(), "--query", "p"]);
    assert_eq!(kb, "sig: xor\np ^ q\nq\nLp\n");

    let consts = write(&dir, "c.kb", "sig: xor,1\np ^ 1\n");
    assert_eq!(
        run_ok(&["reduce", "constants", consts.to_str().unwrap()]),
        "sig: xor\np ^ t\nt\n"
    );

    let affine = write(&dir, "a.kb", "sig: xor,1\np ^ Lp ^ 1\n");
    let brave = run_ok(&["reduce", "brave", affine.to_str().unwrap(), "--query", "p"]);
    assert_eq!(brave, "sig: xor,1\np ^ Lp ^ 1\nLp ^ aux ^ 1\nLaux\n");
    let cautious = run_ok(&[
        "reduce",
        "cautious",
        affine.to_str().unwrap(),
        "--query",
        "p",
    ]);
    assert_eq!(cautious, "sig: xor,1\np ^ Lp ^ 1\nLp ^ aux\nLaux\n");
}

#[test]
fn malformed_dimacs_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "bad.cnf", "p cnf 1 1\n3 0\n");
    let out = ael(&["reduce", "3sat", cnf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn generator_is_deterministic() {
    let a = run_ok(&[
        "gen",
        "--profile",
        "L",
        "--atoms",
        "4",
        "--premises",
        "5",
        "--seed",
        "7",
    ]);
    let b = run_ok(&[
        "gen",
        "--profile",
        "L",
        "--atoms",
        "4",
        "--premises",
        "5",
        "--seed",
        "7",
    ]);
    assert_eq!(a, b);
    assert!(a.starts_with("sig: xor,1\n"));
    assert_eq!(a.lines().count(), 6);
}

#[test]
fn selftest_passes() {
    let out = run_ok(&["selftest", "--cases", "15"]);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.contains(" ok ")), "{out}");
}
