use std::path::Path;
use std::process::{Command, Output};

use lrc::format;
use serde_json::Value;

fn lrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

/// Builds the (8, 4, 2, 3) code at q = 256 under `dir/c`.
fn constructed(dir: &Path, seed: &str) -> (String, String) {
    let prefix = path(dir, "c");
    let o = lrc(&[
        "construct",
        "almost-optimal",
        "--n",
        "8",
        "--k",
        "4",
        "--r",
        "2",
        "--delta",
        "3",
        "--q",
        "256",
        "--partition",
        "4,4",
        "--seed",
        seed,
        "--out",
        &prefix,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    (format!("{prefix}.code"), format!("{prefix}.loc"))
}

#[test]
fn bound_prints_d_opt() {
    let o = lrc(&["bound", "--n", "8", "--k", "4", "--r", "2", "--delta", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "d_opt = 3"));
}

#[test]
fn usage_errors_exit_64() {
    let o = lrc(&["bound", "--n", "8", "--k", "4", "--r", "2"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--delta"));

    let o = lrc(&[
        "bound", "--n", "eight", "--k", "4", "--r", "2", "--delta", "3",
    ]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--n"));

    assert_eq!(lrc(&["--help"]).status.code(), Some(0));
}

#[test]
fn library_errors_exit_1() {
    let o = lrc(&["mindist", "/nonexistent/code.txt"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lrc(&["bound", "--n", "4", "--k", "4", "--r", "2", "--delta", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_reports_carry_schema_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (code, loc) = constructed(dir.path(), "11");
    let o = lrc(&[
        "--format",
        "json",
        "simulate",
        &code,
        "--locality",
        &loc,
        "--delta",
        "3",
        "--trials",
        "20",
        "--seed",
        "4",
    ]);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["success_rate"], 1.0);
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 11);
    assert_eq!(report["measured_d"]["value"], 3);
}

#[test]
fn family_then_quasi_verify_is_optimal() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = path(dir.path(), "f");
    let o = lrc(&[
        "construct",
        "family",
        "--name",
        "c1-43",
        "--i",
        "1",
        "--out",
        &prefix,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = lrc(&[
        "--format",
        "json",
        "quasi",
        "verify",
        &format!("{prefix}.quc"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let got: Vec<i64> = ["n", "k", "d", "r"]
        .iter()
        .map(|k| v[k].as_i64().unwrap())
        .collect();
    assert_eq!(got, vec![8, 4, 4, 3]);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["per_symbol_locality"].as_array().unwrap().len(), 8);
}

#[test]
fn repair_two_erasures_in_one_block() {
    let dir = tempfile::tempdir().unwrap();
    let (code, loc) = constructed(dir.path(), "2");
    let o = lrc(&[
        "--format",
        "json",
        "repair",
        &code,
        "--locality",
        &loc,
        "--delta",
        "3",
        "--message",
        "5,0,17,200",
        "--erase",
        "2,3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["repaired"], v["original"]);
    assert_eq!(v["matches_original"], true);

    let o = lrc(&[
        "repair",
        &code,
        "--locality",
        &loc,
        "--delta",
        "3",
        "--message",
        "5,0,17,200",
        "--erase",
        "1,2,3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status = failed"));
}

#[test]
fn repair_from_word_file() {
    let dir = tempfile::tempdir().unwrap();
    let (code, loc) = constructed(dir.path(), "3");
    let c = format::parse_code(&std::fs::read_to_string(&code).unwrap()).unwrap();
    let word = c.encode(&[1, 2, 3, 4]).unwrap();
    let mut received: Vec<Option<u32>> = word.iter().map(|&x| Some(x)).collect();
    received[4] = None;
    let wpath = path(dir.path(), "w.txt");
    std::fs::write(&wpath, format::write_word(&received)).unwrap();
    let o = lrc(&[
        "--format",
        "json",
        "repair",
        &code,
        "--locality",
        &loc,
        "--delta",
        "3",
        "--word",
        &wpath,
        "--erase",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let got: Vec<u32> = serde_json::from_value(json(&o)["repaired"].clone()).unwrap();
    assert_eq!(got, word);
}

#[test]
fn failed_locality_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (code, loc) = constructed(dir.path(), "5");
    let o = lrc(&[
        "verify",
        &code,
        "--locality",
        &loc,
        "--r",
        "2",
        "--delta",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("label = optimal"));
    // sets of size 4 are too large for r = 1
    let o = lrc(&[
        "verify",
        &code,
        "--locality",
        &loc,
        "--r",
        "1",
        "--delta",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("locality = fail"));
}

#[test]
fn discover_finds_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = constructed(dir.path(), "6");
    let o = lrc(&[
        "--format",
        "json",
        "verify",
        &code,
        "--discover",
        "--r",
        "2",
        "--delta",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["repair_sets"][0], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["repair_sets"][7], serde_json::json!([5, 6, 7, 8]));
}

#[test]
fn identical_runs_print_identical_bytes() {
    let args = [
        "construct",
        "almost-optimal",
        "--n",
        "10",
        "--k",
        "4",
        "--r",
        "2",
        "--delta",
        "3",
        "--q",
        "64",
        "--seed",
        "9",
    ];
    let a = lrc(&args);
    let b = lrc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn emitted_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, loc) = constructed(dir.path(), "8");
    let text = std::fs::read_to_string(&code).unwrap();
    assert_eq!(
        format::write_code(&format::parse_code(&text).unwrap()),
        text
    );
    let text = std::fs::read_to_string(&loc).unwrap();
    assert_eq!(
        format::write_locality(&format::parse_locality(&text).unwrap()),
        text
    );
}

#[test]
fn enlarge_then_puncture() {
    let dir = tempfile::tempdir().unwrap();
    let (code, loc) = constructed(dir.path(), "4");
    let big = path(dir.path(), "big");
    let o = lrc(&[
        "--format",
        "json",
        "enlarge",
        &code,
        "--locality",
        &loc,
        "--r",
        "2",
        "--delta",
        "3",
        "--seed",
        "1",
        "--out",
        &big,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(
        (v["n"].as_u64(), v["k"].as_u64(), v["r"].as_u64()),
        (Some(9), Some(5), Some(3))
    );
    assert_eq!(v["label"], "optimal");

    let o = lrc(&[
        "--format",
        "json",
        "puncture",
        &format!("{big}.code"),
        "--locality",
        &format!("{big}.loc"),
        "--coord",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(8), Some(4)));
    assert!(v["d"]["value"].as_u64() >= v["d_input"]["value"].as_u64());
    assert!(v["files"]["code"].as_str().unwrap().starts_with("LRC1"));
}

#[test]
fn random_check_reports_floor() {
    let o = lrc(&[
        "--format",
        "json",
        "construct",
        "random",
        "--n",
        "8",
        "--k",
        "4",
        "--r",
        "2",
        "--delta",
        "3",
        "--q",
        "16",
        "--seed",
        "0",
        "--check",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["floor"], 3);
    assert!(v["floor_met"].is_boolean());
}

#[test]
fn exhausted_retries_exit_2() {
    let o = lrc(&[
        "construct",
        "almost-optimal",
        "--n",
        "12",
        "--k",
        "6",
        "--r",
        "2",
        "--delta",
        "3",
        "--q",
        "4",
        "--seed",
        "2",
        "--retries",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("no verified code after 1 attempts"));
    assert!(out.contains("seed = 2"));
}
