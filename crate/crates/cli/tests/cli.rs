use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ghzcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghzcert")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--output", &path]);
    let out = ghzcert(&all);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    path
}

fn report(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_sizes_and_parity() {
    let out = ghzcert(&["generate", "--construction", "odd", "--d", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("26 states in dims (3, 3, 3)"));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["tuples"].as_array().unwrap().len(), 13);

    let out = ghzcert(&["generate", "--construction", "c444w4"]);
    assert!(stderr(&out).contains("64 states"));

    let out = ghzcert(&["generate", "--construction", "even", "--d", "5"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("even d >= 4"));
    assert_eq!(code(&ghzcert(&["generate", "--construction", "c999"])), 3);
    assert_eq!(code(&ghzcert(&["generate"])), 3);
}

#[test]
fn certify_both_agrees() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "c333.json", &["--construction", "c333"]);
    let out_path = dir.path().join("report.json");
    let out =
        ghzcert(&["certify", "--input", &input, "--method", "both", "--output", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("arithmetic: exact"));
    let r = report(&out_path);
    assert_eq!(r["verdict"], "strongest-nonlocal");
    assert_eq!(r["oracle"]["agrees_with_graphs"], true);
    assert_eq!(r["graphs"]["criterion"], "weight-two-equivalence");
    assert_eq!(r["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn certify_ablated_even_four_with_oracle() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "even4.json", &["--construction", "even", "--d", "4"]);
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&input).unwrap()).unwrap();
    doc["tuples"].as_array_mut().unwrap().retain(|t| !matches!(t["label"].as_str(), Some("S4" | "S5")));
    let ablated = dir.path().join("ablated.json");
    std::fs::write(&ablated, doc.to_string()).unwrap();
    let out = ghzcert(&["certify", "-i", ablated.to_str().unwrap(), "--method", "oracle"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.get("graphs").is_none());
    assert_eq!(r["oracle"]["verdicts"][0]["dimension"], 2);
}

#[test]
fn certify_even_four_reports_violations() {
    let out = ghzcert(&["certify", "--construction", "even", "--d", "4"]);
    assert_eq!(code(&out), 2);
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["verdict"], "hypotheses-violated");
    assert_eq!(r["hypotheses"]["special_set_offenders"][0]["label"], "S5");
}

#[test]
fn certify_malformed_input() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"dims\": [3, 3, 3],\n \"tuples\": [{\"weight\": 2, \"kets\": [[0,0,0],[9,1,1]]}]}",
    )
    .unwrap();
    let out = ghzcert(&["certify", "-i", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("tuple #0"), "{}", stderr(&out));
    assert_eq!(code(&ghzcert(&["certify", "-i", "/nonexistent/file.json"])), 3);
}

#[test]
fn reports_are_deterministic() {
    let a = ghzcert(&["certify", "--construction", "c345", "--method", "both"]);
    let b = ghzcert(&["certify", "--construction", "c345", "--method", "both"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn graph_files() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = ghzcert(&["graph", "--construction", "c333", "--partition", "A", "--out-dir", d]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("nodes=9") && stdout(&out).contains("components=1 connected"));
    let dot = std::fs::read_to_string(dir.path().join("c333_G_A.dot")).unwrap();
    assert_eq!(dot.matches(';').count() - dot.matches(" -- ").count(), 9);

    let out = ghzcert(&["graph", "--construction", "c444w4", "--path-subgraph", "--out-dir", d]);
    assert_eq!(stdout(&out).lines().count(), 3);
    assert!(stdout(&out).contains("nodes=16 edges=24 tuple-edges=48"));
    for p in ["A", "B", "C"] {
        assert!(dir.path().join(format!("c444w4_Ghat_{p}.dot")).exists());
    }
    assert_eq!(code(&ghzcert(&["graph", "--construction", "c333", "--partition", "D"])), 3);
}

#[test]
fn oracle_lines_and_dump() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = ghzcert(&[
        "oracle",
        "--construction",
        "c333",
        "--partition",
        "A",
        "--arithmetic",
        "exact",
        "--dump-system",
        d,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "partition A|BC: dim=1 trivial-only (exact)\n");
    let dump = std::fs::read_to_string(dir.path().join("c333_A.triplets")).unwrap();
    assert!(dump.contains("# unknowns 81\n# rows 650\n"));
}

#[test]
fn oracle_single_pair_and_guard() {
    let dir = TempDir::new().unwrap();
    let pair = dir.path().join("pair.json");
    std::fs::write(&pair, r#"{"dims": [2, 2, 2], "tuples": [{"weight": 2, "kets": [[0,0,0],[1,1,1]]}]}"#)
        .unwrap();
    let out = ghzcert(&["oracle", "-i", pair.to_str().unwrap(), "--partition", "B"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "partition B|CA: dim=15 nontrivial-exists (exact)\n");

    let out = ghzcert(&["oracle", "--construction", "odd", "--d", "13"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("28561 unknowns"));

    let out = ghzcert(&["oracle", "--construction", "c345", "--arithmetic", "float"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("tolerance 1e-9"));
}
