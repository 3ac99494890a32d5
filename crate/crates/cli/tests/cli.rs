use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use specorder::fixtures;
use specorder::io;
use specorder::linalg::ComplexMatrix;
use specorder_cli::Report;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_specorder"));
    c.env_remove("SPECORDER_TOL");
    c
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn theta_files(dir: &TempDir, theta: f64) -> (PathBuf, PathBuf) {
    let (a, b) = fixtures::theta_pair(theta);
    (
        write(dir, "a.json", &io::tuple_to_json(&a)),
        write(dir, &format!("b{theta}.json"), &io::tuple_to_json(&b)),
    )
}

fn json(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn run(args: &[&str], paths: &[&Path]) -> Output {
    let mut c = bin();
    c.args(args);
    for p in paths {
        c.arg(p);
    }
    c.output().unwrap()
}

#[test]
fn check_order_theta_family() {
    let dir = TempDir::new().unwrap();
    let (a, b2) = theta_files(&dir, 2.0);
    let out = run(&["--format", "json", "check-order"], &[&a, &b2]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r.verdicts.iter().all(|v| v.holds && v.witness.is_none()));
    assert_eq!(r.timing_ms, None);

    let (a, b3) = theta_files(&dir, 3.0);
    let out = run(&["--format", "json", "check-order"], &[&a, &b3]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r.verdicts.len(), 2);
    assert!(r.verdicts.iter().all(|v| !v.holds && v.witness.is_some()));
}

#[test]
fn check_order_monomial_scan() {
    let dir = TempDir::new().unwrap();
    let (a, b3) = theta_files(&dir, 3.0);
    let out = run(
        &[
            "--format",
            "json",
            "--alpha-max",
            "16",
            "check-order",
            "--monomials",
        ],
        &[&a, &b3],
    );
    let r = json(&out);
    let scan = r
        .verdicts
        .iter()
        .find(|v| v.name.starts_with("monomials"))
        .unwrap();
    assert!(!scan.holds);
    assert_eq!(
        serde_json::to_value(scan.witness.as_ref().unwrap()).unwrap()["alpha"],
        serde_json::json!([0, 13])
    );
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let (a, _) = theta_files(&dir, 2.0);
    let single = write(
        &dir,
        "one.json",
        r#"{"schema":"specorder/1","kappa":1,"dim":2,"matrices":[[[1,0],[0,0],[0,0],[2,0]]]}"#,
    );
    let out = run(&["check-order"], &[&a, &single]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa"));

    let broken = write(
        &dir,
        "broken.json",
        "{\"schema\": \"specorder/1\",\n  \"kappa\": ]",
    );
    let out = run(&["check-order"], &[&a, &broken]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("line 2"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["check-order"], &[&a, &missing]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["--alpha-max", "17", "check-order"], &[&a, &a])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["--tol", "-1", "check-order"], &[&a, &a])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"], &[]).status.code(), Some(2));
    let out = run(&["calculus", "--function", "monomial:1"], &[&a]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_flag_beats_environment() {
    let dir = TempDir::new().unwrap();
    let (a, b) = theta_files(&dir, 2.0);
    let mut c = bin();
    c.env("SPECORDER_TOL", "0.25")
        .args(["--format", "json", "check-order"])
        .arg(&a)
        .arg(&b);
    assert_eq!(json(&c.output().unwrap()).tolerances.order, 0.25);
    let mut c = bin();
    c.env("SPECORDER_TOL", "0.25")
        .args(["--format", "json", "--tol", "1e-6", "check-order"])
        .arg(&a)
        .arg(&b);
    assert_eq!(json(&c.output().unwrap()).tolerances.order, 1e-6);
    let mut c = bin();
    c.env("SPECORDER_TOL", "abc")
        .args(["check-order"])
        .arg(&a)
        .arg(&b);
    assert_eq!(c.output().unwrap().status.code(), Some(2));
}

#[test]
fn calculus_outputs() {
    let dir = TempDir::new().unwrap();
    let (a, _) = theta_files(&dir, 2.0);
    let out_path = dir.path().join("out.json");
    let out = run(
        &[
            "--format",
            "json",
            "calculus",
            "--function",
            "monomial:0,0",
            "-o",
        ],
        &[&out_path, &a],
    );
    assert_eq!(out.status.code(), Some(0));
    let written = io::parse_tuple(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written.kappa(), 1);
    assert!(
        written.ops()[0]
            .matrix()
            .sub(&ComplexMatrix::identity(2))
            .max_abs()
            < 1e-12
    );
    assert_eq!(json(&out).result.unwrap().to_tuple(1e-9).unwrap(), written);

    // positive parts of a positive tuple give the tuple back
    let out = run(
        &[
            "--format",
            "json",
            "calculus",
            "--function",
            "parts:++",
            "--require-monotone",
        ],
        &[&a],
    );
    assert_eq!(out.status.code(), Some(0));
    let back = json(&out).result.unwrap().to_tuple(1e-9).unwrap();
    let (ta, _) = fixtures::theta_pair(2.0);
    assert!(back.distance(&ta).unwrap() < 1e-9);

    // sum of the lattice tuple is P1 + P2
    let (la, _) = fixtures::lattice_pair();
    let lp = write(&dir, "lattice.json", &io::tuple_to_json(&la));
    let r = json(&run(
        &["--format", "json", "calculus", "--function", "sum"],
        &[&lp],
    ));
    let sum = r.result.unwrap().operators().unwrap().remove(0);
    let expected =
        ComplexMatrix::from_real(3, 3, &[1.5, 0.5, 0., 0.5, 1.5, 0., 0., 0., 1.]).unwrap();
    assert!(sum.matrix().sub(&expected).max_abs() < 1e-9);

    let r = json(&run(
        &[
            "--format",
            "json",
            "calculus",
            "--function",
            "clip:0,2:1,0.5",
        ],
        &[&lp],
    ));
    assert_eq!(r.result.unwrap().kappa, 1);
}

#[test]
fn monotonicity_requirement() {
    let dir = TempDir::new().unwrap();
    let (la, _) = fixtures::lattice_pair();
    let lp = write(&dir, "lattice.json", &io::tuple_to_json(&la));
    // x ↦ min(x, 0) is increasing
    let out = run(
        &["calculus", "--function", "parts:--", "--require-monotone"],
        &[&lp],
    );
    assert_eq!(out.status.code(), Some(0));
    let shifted = write(
        &dir,
        "neg.json",
        r#"{"schema":"specorder/1","kappa":1,"dim":2,"matrices":[[[-2,0],[0,0],[0,0],[1,0]]]}"#,
    );
    // (-2)^2 > 1^2
    let out = run(
        &["calculus", "--function", "monomial:2", "--require-monotone"],
        &[&shifted],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not increasing"));
    let out = run(
        &["--format", "json", "calculus", "--function", "monomial:2"],
        &[&shifted],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out).notes[0].contains("not increasing"));
}

#[test]
fn measure_check_dirac_and_equal() {
    let dir = TempDir::new().unwrap();
    let (m1, m2) = fixtures::dirac_pair();
    let p1 = write(&dir, "m1.json", &io::measure_to_json(&m1));
    let p2 = write(&dir, "m2.json", &io::measure_to_json(&m2));
    let out = run(&["--format", "json", "measure-check"], &[&p1, &p2]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert!(r.verdicts[0].holds);
    assert!(!r.verdicts[1].holds);
    let w = serde_json::to_value(r.verdicts[1].witness.as_ref().unwrap()).unwrap();
    assert_eq!(
        w["members"],
        serde_json::json!([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    );
    assert_eq!(
        (w["mass1"].as_f64(), w["mass2"].as_f64()),
        (Some(1.0), Some(2.0))
    );
    assert!(
        r.verdicts
            .iter()
            .find(|v| v.name.starts_with("dominance agrees"))
            .unwrap()
            .holds
    );

    let out = run(&["measure-check"], &[&p1, &p1]);
    assert_eq!(out.status.code(), Some(0));

    // unequal masses are reported, not fatal
    let heavy = write(
        &dir,
        "heavy.json",
        r#"{"schema":"specorder-measure/1","kappa":2,"atoms":[{"point":[0,0],"weight":3}]}"#,
    );
    let out = run(&["--format", "json", "measure-check"], &[&p1, &heavy]);
    assert_ne!(out.status.code(), Some(2));
    assert!(json(&out).notes[0].contains("masses differ"));
}

#[test]
fn examples_and_selftest() {
    let out = run(&["examples"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0.666666666667"));
    let out = run(&["--alpha-max", "16", "--format", "json", "examples"], &[]);
    assert!(json(&out).notes.iter().any(|n| n.contains("[0, 13]")));

    let a = run(
        &[
            "--format", "json", "--seed", "7", "selftest", "--cases", "20",
        ],
        &[],
    );
    let b = run(
        &[
            "--format", "json", "--seed", "7", "selftest", "--cases", "20",
        ],
        &[],
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_json_round_trips() {
    let out = run(&["--format", "json", "--timing", "examples"], &[]);
    let r = json(&out);
    assert!(r.timing_ms.is_some());
    let again: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(again, r);
}
