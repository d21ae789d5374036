use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn mxc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mxc")).args(args).output().expect("mxc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn removable_pyramid() {
    let o = mxc(&["removable", "builtin:pyramid"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "[{0,1}]");
    let o = mxc(&["--one-based", "removable", "builtin:pyramid"]);
    assert_eq!(stdout(&o).trim(), "[{1,2}]");
    assert_eq!(stdout(&mxc(&["removable", "builtin:square"])).trim(), "[]");
}

#[test]
fn removable_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "pyramid.json", r#"{"n": 4, "bases": [[0,1],[0,2],[0,3],[1,2],[1,3]]}"#);
    let o = mxc(&["removable", s(&p)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "[{0,1}]");
}

#[test]
fn white_fano_and_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = mxc(&["white", "builtin:fano", "--max-degree", "3", "--mode", "strong", "--json", s(out)]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains("verified up to degree 3"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report = read_json(&a);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    for c in checks {
        assert_eq!(c["verdict"], "pass");
        let records = c["result"]["records"].as_array().unwrap();
        assert!(records.iter().all(|r| r["pass"] == true && r["components"] == 1));
        assert!(c.get("seconds").is_none());
    }
}

#[test]
fn verify_cert_rejects_step_into_non_basis() {
    let dir = tempfile::tempdir().unwrap();
    // swapping 0 and 3 turns {0,2} into {2,3}, the removed vertex
    let cert = write(dir.path(), "bad.json", r#"{"start": [[0,2],[1,3]], "steps": [{"i":0,"j":1,"x":0,"y":3}]}"#);
    let report = dir.path().join("r.json");
    let o = mxc(&["verify-cert", "builtin:pyramid", s(&cert), "--json", s(&report)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("{2,3}"));
    let r = read_json(&report);
    assert_eq!(r["checks"][0]["verdict"], "fail");
    assert_eq!(r["checks"][0]["witness"]["step_index"], 0);
}

#[test]
fn rewrite_certificates_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("q.json");
    let o = mxc(&["rewrite", "quadratic", "builtin:u24", "2,3", "0,2", "1,3", "0,1", "0,3", "1,2", "--cert", s(&cert)]);
    assert_eq!(code(&o), 0);
    let o = mxc(&["verify-cert", "builtin:pyramid", s(&cert), "--end", "0,3;1,2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // the same certificate does not reach another tuple
    let o = mxc(&["verify-cert", "builtin:pyramid", s(&cert), "--end", "0,2;1,3"]);
    assert_eq!(code(&o), 1);

    let rel = write(dir.path(), "rel.json", r#"{"lhs": [[2,3],[0,1]], "rhs": [[0,2],[1,3]]}"#);
    let push = dir.path().join("p.json");
    let o = mxc(&["rewrite", "push-down", "builtin:u24", "2,3", s(&rel), "--cert", s(&push)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("push-down/greedy"));
    assert_eq!(code(&mxc(&["verify-cert", "builtin:u24", s(&push), "--end", "0,2;1,3"])), 0);

    let rel = write(dir.path(), "lift.json", r#"{"lhs": [[0,2],[1,3]], "rhs": [[0,3],[1,2]]}"#);
    let lift = dir.path().join("l.json");
    let o = mxc(&["rewrite", "lift", "builtin:u24", "2,3", s(&rel), "--cert", s(&lift)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&mxc(&["verify-cert", "builtin:pyramid", s(&lift), "--end", "0,3;1,2"])), 0);
}

#[test]
fn rewrite_rejects_bad_input() {
    // {0,1} and {1,3} do not exchange through {2,3}
    let o = mxc(&["rewrite", "quadratic", "builtin:u24", "2,3", "0,1", "1,3", "0,1", "0,3", "1,2"]);
    assert_eq!(code(&o), 2);
    let o = mxc(&["rewrite", "type-b", "builtin:square", "0,2", "0,3", "1,2", "1,2", "0,3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&mxc(&["validate", "builtin:nope"])), 2);
    assert_eq!(code(&mxc(&["validate", "/nonexistent/m.json"])), 2);
    assert_eq!(code(&mxc(&["remove-basis", "builtin:pyramid", "--basis", "2,3"])), 2);
    assert_eq!(code(&mxc(&["remove-basis", "builtin:pyramid", "--basis", "0,x"])), 2);
    assert_eq!(code(&mxc(&["white", "builtin:fano", "--max-degree", "3", "--fiber-cap", "10"])), 2);
    assert_eq!(code(&mxc(&["frobnicate"])), 2);
}

#[test]
fn validate_reports_exchange_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", r#"{"n": 4, "bases": [[0,1],[2,3]]}"#);
    let o = mxc(&["validate", s(&p)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not a matroid"));
    let o = mxc(&["validate", "builtin:matrix47"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("30 bases"));
}

#[test]
fn remove_basis_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sq.json");
    let o = mxc(&["remove-basis", "builtin:pyramid", "--basis", "0,1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_json(&out), serde_json::json!({"n": 4, "bases": [[0,2],[1,2],[0,3],[1,3]]}));
    let o = mxc(&["remove-basis", s(&out), "--basis", "0,2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not removable"));
}

#[test]
fn sparse_paving_chain_replays() {
    let dir = tempfile::tempdir().unwrap();
    let o = mxc(&["sparse-paving", "builtin:fano", "--chain"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let chain = write(dir.path(), "chain.json", &text[text.find('{').unwrap()..]);
    let report = dir.path().join("r.json");
    let o = mxc(&["replay-chain", s(&chain), "--json", s(&report)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("step 7"));
    let fano = stdout(&mxc(&["circuits", "builtin:fano"]));
    assert!(fano.contains("{0,1,2}"));
    assert_eq!(read_json(&report)["checks"][0]["result"]["target"]["bases"].as_array().unwrap().len(), 28);

    let o = mxc(&["sparse-paving", "builtin:matrix47"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "a.txt", "4 7\n1 0 0 1 0 1 5\n0 0 0 0 1 1 7\n1 0 1 0 0 0 3\n1 1 0 0 0 0 -3\n");
    let out = dir.path().join("m.json");
    let o = mxc(&["from-matrix", s(&p), "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_json(&out)["bases"].as_array().unwrap().len(), 30);
    let o = mxc(&["remove-basis", s(&out), "--basis", "0,1,4,6"]);
    assert_eq!(code(&o), 0);
    let bad = write(dir.path(), "b.txt", "2 2\n1 0\n0\n");
    assert_eq!(code(&mxc(&["from-matrix", s(&bad)])), 2);
}

#[test]
fn polytope_checks() {
    let o = mxc(&["polytope", "builtin:nonfano", "edges"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("equal"));
    assert_eq!(code(&mxc(&["polytope", "builtin:pyramid", "ggms"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = mxc(&["polytope", "builtin:pyramid", "ggms", "--without", "0,2", "--json", s(&report)]);
    assert_eq!(code(&o), 1);
    let w = &read_json(&report)["checks"][0]["witness"];
    assert_eq!(w["certificate"]["kind"], "edge");
    assert_eq!(code(&mxc(&["polytope", "builtin:pyramid", "cut", "--basis", "0,1"])), 0);
}

#[test]
fn ingest_reports_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.txt", "111111\n");
    let out = dir.path().join("out.json");
    let o = mxc(&["ingest", s(&good), "--n", "4", "--r", "2", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_json(&out)[0]["bases"].as_array().unwrap().len(), 6);
    let empty = write(dir.path(), "empty.txt", "");
    assert_eq!(code(&mxc(&["ingest", s(&empty), "--n", "4", "--r", "2"])), 0);
    let bad = write(dir.path(), "bad.txt", "111110\n100001\n");
    let o = mxc(&["ingest", s(&bad), "--n", "4", "--r", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("line 2"));
}

#[test]
fn audit_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = mxc(&["audit", "builtin:u37", "--b", "0,1,2", "--samples", "300", "--exhaustive-limit", "500", "--seed", "9", "--json", s(out)]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_json(&a)["checks"].as_array().unwrap().len(), 5);
}
