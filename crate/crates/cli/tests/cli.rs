use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn testset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_testset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const SINGLETONS: &str = r#"{"n":4,"r":1,"tests":[[0],[1],[2],[3]]}"#;

#[test]
fn solve_singletons() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "inst.json", SINGLETONS);
    let out = testset(&["solve", "--input", &input]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["picks"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["trace"][0]["measure_before"], 6);
    assert_eq!(v["trace"][2]["measure_after"], 0);

    let out = testset(&["solve", "--input", &input, "--r", "2"]);
    assert_eq!(json(&out)["picks"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn solve_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "inst.json", SINGLETONS);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = testset(&[
            "solve",
            "--input",
            &input,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn infeasible_exit_code_and_no_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "inst.json", r#"{"n":3,"r":1,"tests":[[0,1]]}"#);
    let output = dir.path().join("sol.json");
    let out = testset(&[
        "solve",
        "--input",
        &input,
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&output).exists());
    assert_eq!(
        testset(&["exact", "--input", &input]).status.code(),
        Some(2)
    );
}

#[test]
fn parse_errors() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "bad.json",
        "{\"n\": 3,\n \"r\": 1, \"tests\": [[0, 1],",
    );
    let out = testset(&["solve", "--input", &input]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let input = write(
        &dir,
        "range.json",
        r#"{"n": 3, "r": 1, "tests": [[0], [7]]}"#,
    );
    let out = testset(&["solve", "--input", &input]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tests[1][0]"));

    let out = testset(&["solve", "--input", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exact_certificate_and_budget() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "inst.json",
        r#"{"n":4,"r":2,"tests":[[0],[1],[2],[3]]}"#,
    );
    let out = testset(&["exact", "--input", &input]);
    assert!(out.status.success());
    assert_eq!(
        json(&out),
        serde_json::json!({"m_star": 4, "witness": [0, 1, 2, 3], "hash_b": 6})
    );
    let out = testset(&["exact", "--input", &input, "--oracle-budget", "0"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bounds_and_trace() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "inst.json", SINGLETONS);
    let v = json(&testset(&["bounds", "--input", &input]));
    assert_eq!(v["sga_size"], 3);
    assert_eq!(v["m_star"], 3);
    assert_eq!(v["ratio"], 1.0);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));

    let out = testset(&[
        "bounds",
        "--input",
        &input,
        "--format",
        "csv",
        "--skip-oracle",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("4,4,1,6,,"), "{row}");

    let v = json(&testset(&["trace", "--input", &input]));
    assert_eq!(v["split"]["prefix"], 1);
    assert_eq!(v["checks"]["monotone"], true);

    let trivial = write(&dir, "two.json", r#"{"n":2,"r":1,"tests":[[0]]}"#);
    let v = json(&testset(&["trace", "--input", &trivial]));
    assert!(v["skipped"].as_str().unwrap().contains("degenerate"));
}

#[test]
fn gen_random_and_barcode() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "spec.json",
        r#"{"kind":"random","n":6,"t":10,"p":0.5,"r":1,"seed":42}"#,
    );
    let a = testset(&["gen", "--input", &spec]);
    let b = testset(&["gen", "--input", &spec]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = testset(&["gen", "--input", &spec, "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(json(&a)["tests"].as_array().unwrap().len(), 10);

    let spec = write(
        &dir,
        "bar.json",
        r#"{"kind":"barcode","sequences":["acg","ctt","gga"],"min_len":1,"max_len":2,"r":1}"#,
    );
    let inst_path = dir.path().join("bar_inst.json");
    let out = testset(&[
        "gen",
        "--input",
        &spec,
        "--output",
        inst_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = testset(&["solve", "--input", inst_path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn reduce_export() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "inst.json", r#"{"n":3,"r":2,"tests":[[0],[]]}"#);
    let out = testset(&["reduce", "--input", &input]);
    assert_eq!(
        json(&out),
        serde_json::json!({"N": 3, "r": 2, "subsets": [[0, 1], []]})
    );
}

#[test]
fn sweep_outputs() {
    let out = testset(&["sweep", "--n-min", "5", "--n-max", "4"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "n,t,r,seed,m_star,sga_size,ratio,rho1,hash_b,lemma1_bound,lemma2_size_bound,assertions_passed\n"
    );

    let args = [
        "sweep", "--n-min", "4", "--n-max", "6", "--seeds", "3", "--seed", "5",
    ];
    let a = testset(&args);
    let b = testset(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    // 27 rows + 9 summaries + header
    assert_eq!(text.lines().count(), 37);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")), "{text}");

    let out = testset(&[
        "sweep",
        "--n-min",
        "4",
        "--n-max",
        "5",
        "--seeds",
        "2",
        "--oracle-budget",
        "0",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1).filter(|l| !l.contains("summary")) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[4], "");
        assert!(!cols[5].is_empty());
        assert_eq!(cols[11], "skip");
    }
}
