//! End-to-end runs of the binary. JSON reports of the witness runs are compared with
//! the files in tests/golden; set UPDATE_GOLDEN=1 to rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_flagdual"));
    c.env_remove("FLAGDUAL_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flagdual-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn golden(name: &str, args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--report", "-"];
    full.extend_from_slice(args);
    let out = run(&full);
    let text = stdout(&out);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    } else {
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(text == expected, "{name}: report differs from {}", path.display());
    }
    assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&text).unwrap()
}

#[test]
fn golden_degree() {
    let v = golden("motivic_degree", &["motivic", "degree"]);
    assert_eq!(v["stages"][0]["detail"]["degree"], 25);
    assert_eq!(v["schema"], "flagdual-report/1");
}

#[test]
fn golden_l_relation() {
    golden("motivic_l_relation", &["motivic", "l-relation"]);
}

#[test]
fn golden_witness_nonbirational() {
    let v = golden("duality_nonbirational", &["duality", "nonbirational"]);
    assert_eq!(v["stages"][0]["status"], "certified-empty");
    assert_eq!(v["section"][4][1], "1");
    assert!(v["conventions"].is_object());
}

#[test]
fn golden_witness_selfdual() {
    golden("duality_selfdual", &["duality", "selfdual"]);
}

#[test]
fn golden_witness_point_count() {
    golden("motivic_count_q3", &["motivic", "count", "--q", "3"]);
}

#[test]
fn golden_bwb_lemma() {
    golden("bwb_lemma_qo", &["bwb", "lemma", "--name", "vanishingQO", "--range", "0..7"]);
}

#[test]
fn golden_collection() {
    golden("check_collection_g25", &["mutations", "check-collection", "--name", "kuznetsov25"]);
}

#[test]
fn golden_verify_paper() {
    let v = golden("verify_paper_witness", &["verify-paper"]);
    assert_eq!(v["stages"].as_array().unwrap().len(), 11);
    assert_eq!(v["pass"], true);
}

#[test]
fn witness_file_matches_builtin_witness() {
    let dir = scratch("witness");
    let file = dir.join("s.mat");
    let rows = [
        "1 0 0 0 0 0 0 0 0 0",
        "0 0 0 0 0 0 0 0 0 0",
        "0 0 0 0 0 0 0 0 0 0",
        "0 0 0 0 0 0 0 0 0 0",
        "0 1 0 0 0 0 0 0 0 0",
        "0 0 0 0 0 -1 0 0 0 0",
        "0 0 0 0 0 0 1 0 0 0",
        "0 0 0 0 0 0 0 -1 0 0",
        "0 0 0 0 0 0 0 0 -1 0",
        "0 0 0 0 0 0 0 0 0 1",
    ];
    std::fs::write(&file, rows.join("\n")).unwrap();
    let a = run(&["--report", "-", "duality", "selfdual", "--section", file.to_str().unwrap()]);
    let b = run(&["--report", "-", "duality", "selfdual"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn reports_are_deterministic() {
    let args = ["--report", "-", "--seed", "9", "--field", "11", "duality", "selfdual", "--section", "random"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn symmetric_section_fails_with_exit_1() {
    let dir = scratch("sym");
    let file = dir.join("sym.mat");
    let rows: Vec<String> =
        (0..10).map(|i| (0..10).map(|j| if i == j { "1" } else { "0" }).collect::<Vec<_>>().join(" ")).collect();
    std::fs::write(&file, rows.join("\n")).unwrap();
    let out = run(&["--field", "13", "duality", "selfdual", "--section", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["--field", "37", "motivic", "degree"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "GF(9)", "motivic", "degree"]).status.code(), Some(2));
    assert_eq!(run(&["bwb", "lemma", "--name", "serre", "--range", "5..1"]).status.code(), Some(2));
    assert_eq!(run(&["duality", "selfdual", "--section", "/nonexistent/s.mat"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn unknown_names_are_failed_stages() {
    let out = run(&["mutations", "check-collection", "--name", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("error"));
}

#[test]
fn budget_env_var_is_honoured() {
    let out = bin().env("FLAGDUAL_BUDGET", "10").args(["duality", "nonbirational"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("budget-exceeded"));
    // the flag wins over the environment
    let out = bin().env("FLAGDUAL_BUDGET", "10").args(["--budget", "100000", "duality", "nonbirational"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn build_writes_polynomial_files() {
    let dir = scratch("build");
    let out = run(&["duality", "build", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let quadrics = std::fs::read_to_string(dir.join("quadrics.txt")).unwrap();
    let quintics = std::fs::read_to_string(dir.join("quintics.txt")).unwrap();
    assert!(quadrics.contains("x12"));
    assert!(quintics.contains("b11"));
}

#[test]
fn replay_writes_step_log() {
    let dir = scratch("replay");
    let log = dir.join("log.json");
    let out = run(&["mutations", "replay", "--log", log.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&log).unwrap()).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn report_file_and_summary() {
    let dir = scratch("report");
    let path = dir.join("r.json");
    let out = run(&["--report", path.to_str().unwrap(), "bwb", "cohomology", "--space", "F", "--weight", "2,2|1|0,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("PASS"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "bwb cohomology");
}

#[test]
fn glsm_point_input() {
    let dir = scratch("glsm");
    let file = dir.join("p.mat");
    std::fs::write(&file, "1 0 0\n0 1 0\n0 0 1\n0 0 0\n0 0 0\n1 0 0\n").unwrap();
    let out = run(&["--samples", "50", "glsm", "stability", "--chamber", "minus", "--point", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
