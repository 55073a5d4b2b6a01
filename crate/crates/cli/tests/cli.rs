//! End-to-end runs of the `gw` binary.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn gw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gw")).args(args).output().expect("gw runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn form_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const OMEGA2: &str = "field q=2\ndim m=7\ngrade 3\n1 2 3 : 1\n1 4 5 : 1\n";
const OMEGA10: &str = "# seven-dimensional generic form\nfield q=2\ndim m=7\ngrade 3\n\
1 2 3 : 1\n4 5 6 : 1\n1 4 7 : 1\n2 5 7 : 1\n3 6 7 : 1\n";

#[test]
fn params() {
    let o = gw(&["params", "--l", "3", "--m", "7", "--q", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "n=11811 k=35");
    let o = gw(&["params", "--l", "2", "--m", "4", "--q", "2", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], "35");
    assert_eq!(v["k"], 6);
    let o = gw(&["params", "--l", "1", "--m", "4", "--q", "3"]);
    assert_eq!(stdout(&o).trim(), "n=40 k=4");
}

#[test]
fn weight_methods() {
    let f = form_file(OMEGA2);
    let path = f.path().to_str().unwrap();
    for method in ["direct", "formula", "triples"] {
        let o = gw(&["weight", "--form", path, "--method", method]);
        assert!(o.status.success(), "{method}");
        assert_eq!(stdout(&o).trim(), "5120", "{method}");
    }
    let f = form_file(OMEGA10);
    let o = gw(&["weight", "--form", f.path().to_str().unwrap(), "--all"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "direct: 5952\nformula: 5952\ntriples: 5952\n");
}

#[test]
fn parse_errors_report_the_line() {
    let f = form_file("field q=2\ndim m=7\ngrade 3\n1 2 : 1\n");
    let o = gw(&["weight", "--form", f.path().to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn classify_and_xvariety() {
    let f = form_file(OMEGA10);
    let path = f.path().to_str().unwrap();
    let v: Value = serde_json::from_str(&stdout(&gw(&["classify", "--form", path]))).unwrap();
    assert_eq!(v["class"], 10);
    assert_eq!(v["r"], 0);
    assert_eq!(v["x1_card"], 0);
    assert!(v["variant"].is_null());

    let v: Value = serde_json::from_str(&stdout(&gw(&["xvariety", "--form", path, "--i", "2", "--points"]))).unwrap();
    assert_eq!(v["cardinality"], 63);
    assert_eq!(v["points"].as_array().unwrap().len(), 63);
    assert_eq!(v["form"]["terms"].as_array().unwrap().len(), 5);

    let f = form_file(OMEGA2);
    let o = gw(&["xvariety", "--form", f.path().to_str().unwrap(), "--i", "1"]);
    assert!(!o.status.success());
}

#[test]
fn spectrum37() {
    let v: Value = serde_json::from_str(&stdout(&gw(&["spectrum37", "--q", "2", "--json"]))).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 9);
    assert_eq!(entries[0]["weight"], 4096);
    let merged = entries.iter().find(|e| e["weight"] == 5760).unwrap();
    assert_eq!(merged["classes"], serde_json::json!(["5b", "6"]));
    let total: u128 = entries.iter().map(|e| e["count"].as_str().unwrap().parse::<u128>().unwrap()).sum();
    assert_eq!(total, (1u128 << 35) - 1);

    let v: Value = serde_json::from_str(&stdout(&gw(&["spectrum37", "--q", "3", "--json"]))).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 10);
    assert_eq!(v["entries"][0]["weight"], 531441);
}

#[test]
fn sampling_is_deterministic_across_thread_counts() {
    let a = gw(&["--threads", "1", "sample", "--q", "2", "--count", "500", "--seed", "11", "--json"]);
    let b = gw(&["--threads", "3", "sample", "--q", "2", "--count", "500", "--seed", "11", "--json"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn genmatrix_csv() {
    let o = gw(&["genmatrix", "--l", "1", "--m", "2", "--q", "2"]);
    assert_eq!(stdout(&o), "1,2,2,2,3\n1,1,0\n0,1,1\n");
    let o = gw(&["genmatrix", "--l", "2", "--m", "4", "--q", "2"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "2,4,2,6,35");
    assert_eq!(lines.len(), 7);
}

#[test]
fn verify_scopes() {
    let o = gw(&["verify", "identities"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 3);

    let o = gw(&["verify", "tables", "--q", "2,3"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));

    let o = gw(&["verify", "oracles", "--q", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 11);
}

#[test]
fn budget_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_gw"))
        .args(["genmatrix", "--l", "3", "--m", "7", "--q", "2"])
        .env("GW_BUDGET", "1000")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("budget"));
}
