use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const TWO_DIM: &str = r#"{
  "space_dim": 2,
  "basis": [
    {"name": "A", "matrix": {"rows": 2, "cols": 2, "entries": [1, 0, 0, 0]}},
    {"name": "B", "matrix": {"rows": 2, "cols": 2, "entries": [0, 1, 0, 0]}}
  ],
  "subalgebras": {"I1": [[0, 1]]},
  "families": {
    "chain": {"ideals": ["I1", "L"], "order": [["I1", "L"]]},
    "single": {"ideals": ["L"]},
    "broken": {"ideals": ["I1"]}
  }
}"#;

const HEISENBERG: &str = r#"{
  "space_dim": 3,
  "basis": [
    {"name": "X", "matrix": {"rows": 3, "cols": 3, "entries": [0,1,0, 0,0,0, 0,0,0]}},
    {"name": "Y", "matrix": {"rows": 3, "cols": 3, "entries": [0,0,0, 0,0,1, 0,0,0]}},
    {"name": "Z", "matrix": {"rows": 3, "cols": 3, "entries": [0,0,1, 0,0,0, 0,0,0]}}
  ]
}"#;

const DIAGONAL: &str = r#"{
  "space_dim": 2,
  "basis": [{"name": "D", "matrix": {"rows": 2, "cols": 2, "entries": [1, 0, 0, 2]}}]
}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jointspec"));
    c.env_remove("JOINTSPEC_RANK_TOL").env_remove("JOINTSPEC_VALUE_TOL");
    c
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn reals(point: &Value) -> Vec<f64> {
    point["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z[0].as_f64().unwrap())
        .collect()
}

#[test]
fn heisenberg_spectrum_is_the_zero_character() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "h.json", HEISENBERG);
    let out = run(&["spectrum", "--input", &f, "--kind", "taylor"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert_eq!(reals(&points[0]), vec![0.0, 0.0, 0.0]);
}

#[test]
fn single_diagonal_operator_has_two_points() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.json", DIAGONAL);
    let out = run(&["spectrum", "--input", &f]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let pts: Vec<Vec<f64>> = v["points"].as_array().unwrap().iter().map(reals).collect();
    assert_eq!(pts, vec![vec![1.0], vec![2.0]]);
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{ not json");
    let out = run(&["spectrum", "--input", &f]);
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["exit_code"], 1);
    let missing = run(&["spectrum", "--input", "/nonexistent/x.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn level_above_dimension_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", TWO_DIM);
    let out = run(&["spectrum", "--input", &f, "--kind", "delta", "--k", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn limit_over_chain() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", TWO_DIM);
    let out = run(&["limit", "--input", &f, "--family", "chain"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["presentation"], "chain");
    let glued: Vec<Vec<f64>> = v["glued"].as_array().unwrap().iter().map(reals).collect();
    assert_eq!(glued, vec![vec![0.0, 0.0], vec![2.0, 0.0]]);
    assert_eq!(v["checks"]["characterization_equivalence"], true);
    assert_eq!(v["tuples"].as_array().unwrap().len(), 2);

    let single = stdout_json(&run(&["limit", "--input", &f, "--family", "single"]));
    let direct = stdout_json(&run(&["spectrum", "--input", &f]));
    let a: Vec<Vec<f64>> = single["glued"].as_array().unwrap().iter().map(reals).collect();
    let b: Vec<Vec<f64>> = direct["points"].as_array().unwrap().iter().map(reals).collect();
    assert_eq!(a, b);
}

#[test]
fn failing_family_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", TWO_DIM);
    let out = run(&["limit", "--input", &f, "--family", "broken"]);
    assert_eq!(out.status.code(), Some(2));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "FamilyVerification");
}

#[test]
fn verify_checks_pass_on_two_dim_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", TWO_DIM);
    let cases: Vec<Vec<&str>> = vec![
        vec!["--check", "projection", "--family", "chain", "--ideal", "I1"],
        vec!["--check", "presentation", "--family", "chain", "--family", "single"],
        vec!["--check", "uniqueness", "--family", "chain"],
        vec!["--check", "contract", "--ideal", "I1", "--kind", "all"],
    ];
    for extra in cases {
        let mut args = vec!["verify", "--input", f.as_str()];
        args.extend(extra.iter().copied());
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{extra:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["passed"], true);
    }
}

#[test]
fn corrupted_spectrum_fails_contract_check() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", TWO_DIM);
    let good = run(&["spectrum", "--input", &f]);
    let text = String::from_utf8(good.stdout).unwrap();

    let mut child = bin()
        .args(["verify", "--input", &f, "--check", "contract", "--ideal", "I1", "--spectrum", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(0));

    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["points"][0]["values"][1] = serde_json::json!([5.0, 0.0]);
    let bad = write(dir.path(), "bad.json", &doc.to_string());
    let out = run(&["verify", "--input", &f, "--check", "contract", "--ideal", "I1", "--spectrum", &bad]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["passed"], false);
}

#[test]
fn corpus_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = run(&[
            "corpus", "--seed", "42", "--count", "5", "--profile", "conjugated", "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("manifest.json")).unwrap()).unwrap();
    let files = manifest["instances"].as_array().unwrap();
    assert_eq!(files.len(), 5);
    for entry in files {
        let name = entry["file"].as_str().unwrap();
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap()
        );
    }
    assert_eq!(
        std::fs::read(a.path().join("manifest.json")).unwrap(),
        std::fs::read(b.path().join("manifest.json")).unwrap()
    );
}

#[test]
fn corpus_files_load_and_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "corpus", "--seed", "9", "--count", "3", "--max-algebra-dim", "3", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    for entry in stdout_json(&out)["instances"].as_array().unwrap() {
        let f = dir.path().join(entry["file"].as_str().unwrap());
        let f = f.to_str().unwrap();
        for fam in ["chain", "lattice"] {
            let out = run(&["limit", "--input", f, "--family", fam]);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn tolerance_environment_variables_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.json", DIAGONAL);
    let out = bin()
        .args(["spectrum", "--input", &f])
        .env("JOINTSPEC_VALUE_TOL", "1e-5")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["tolerances"]["value_tol"], 1e-5);
    let bad = bin()
        .args(["spectrum", "--input", &f])
        .env("JOINTSPEC_RANK_TOL", "2")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
