use std::path::{Path, PathBuf};
use std::process::Command;

use fixedloci_cli::{run, to_json, ProblemFile, RunOptions};
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(root().join("schema").join(name)).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

fn problems() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("problems"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn assert_valid(s: &jsonschema::JSONSchema, v: &Value, what: &str) {
    if let Err(errors) = s.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what} does not match schema: {msgs:?}");
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fixedloci"))
}

#[test]
fn problem_files_and_reports_match_schemas() {
    let input = schema("problem.schema.json");
    let output = schema("report.schema.json");
    let files = problems();
    assert!(files.len() >= 4);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_valid(&input, &value, &f.display().to_string());
        let problem = ProblemFile::parse(&text).unwrap();
        let opts = RunOptions { orbits: true, timing: true, ..Default::default() };
        let report: Value = serde_json::from_str(&to_json(&run(&problem, &opts).unwrap())).unwrap();
        assert_valid(&output, &report, &format!("report for {}", f.display()));
    }
}

#[test]
fn schema_rejects_unknown_fields() {
    let input = schema("problem.schema.json");
    let bad: Value = serde_json::json!({"kind": "grassmann", "m": 1, "n": 2, "weights": [0, 1], "extra": 1});
    assert!(!input.is_valid(&bad));
    assert!(ProblemFile::parse(&bad.to_string()).is_err());
}

#[test]
fn hirzebruch_runs_through_the_binary() {
    let out = bin().args(["toric"]).arg(root().join("problems/hirzebruch-2.json")).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["fixed_points"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_theta_exits_with_validation_code() {
    let dir = std::env::temp_dir().join(format!("fixedloci-bad-theta-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    let text = std::fs::read_to_string(root().join("problems/kronecker-3.json"))
        .unwrap()
        .replace("\"theta\": [-3, 2]", "\"theta\": [-1, 1]");
    std::fs::write(&path, text).unwrap();
    let out = bin().arg("quiver").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("theta . alpha"), "{err}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir().join(format!("fixedloci-malformed-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"kind\": \"grassmann\",\n \"m\": \"two\"}").unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("field `m`"));
    std::fs::write(&path, "{\"kind\": \"grassmann\",\n \"m\": 2,,}").unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn guard_exits_with_limit_code() {
    let out = bin()
        .args(["quiver", "--prime", "7"])
        .arg(root().join("problems/kronecker-3.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_file_is_an_io_error() {
    let out = bin().args(["run", "/nonexistent/problem.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wrong_subcommand_for_kind() {
    let out = bin().arg("quiver").arg(root().join("problems/projective-plane.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_and_table_output() {
    let fan = bin().args(["run", "--format", "dot"]).arg(root().join("problems/hirzebruch-1.json")).output().unwrap();
    let text = String::from_utf8(fan.stdout).unwrap();
    assert!(text.starts_with("graph fan {"));
    assert_eq!(text.matches(" -- ").count(), 8);

    let quiver = bin().args(["run", "--format", "dot"]).arg(root().join("problems/kronecker-3.json")).output().unwrap();
    let text = String::from_utf8(quiver.stdout).unwrap();
    assert!(text.starts_with("digraph quiver {"));
    assert_eq!(text.matches("subgraph cluster_").count(), 20);

    let table = bin().args(["run", "--format", "table"]).arg(root().join("problems/projective-plane.json")).output().unwrap();
    assert!(String::from_utf8(table.stdout).unwrap().contains("2 components"));

    let no_dot = bin().args(["run", "--format", "dot"]).arg(root().join("problems/projective-plane.json")).output().unwrap();
    assert_eq!(no_dot.status.code(), Some(2));
}

#[test]
fn kempf_flags() {
    let out = bin()
        .args(["kempf", "--support", "", "--inner-product", "1,0;0,4"])
        .arg(root().join("problems/kempf.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["support"], serde_json::json!([]));
    assert_eq!(v["result"]["inner_product"], serde_json::json!([[1, 0], [0, 4]]));
    assert_eq!(v["result"]["semistable"], Value::Bool(false));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("fixedloci-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = bin()
        .args(["grassmann", "--out"])
        .arg(&path)
        .arg(root().join("problems/projective-plane.json"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["count"], 2);
}

#[test]
fn thread_cap_does_not_change_the_report() {
    let f = root().join("problems/kronecker-3.json");
    let a = bin().arg("quiver").arg(&f).env("FIXEDLOCI_THREADS", "1").output().unwrap();
    let b = bin().arg("quiver").arg(&f).env("FIXEDLOCI_THREADS", "4").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
