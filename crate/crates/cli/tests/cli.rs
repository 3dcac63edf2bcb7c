use std::fs;
use std::path::PathBuf;
use std::process::Command;

use fanocalc::{Catalog, FamilyRecord};

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/fano.jsonl")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fanocalc").chain(args.iter().copied());
    let code = fanocalc_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn hodge_of_x66() {
    let (code, out, _) = run(&["hodge", "--weights", "1,5,6,22,33", "--degrees", "66"]);
    assert_eq!(code, 0);
    assert!(out.contains("h21=120\n"), "{out}");
    assert!(out.contains("e=-236\n"));
    assert!(out.contains("basket: 1/2(1,1,1), 1/3(1,1,2), 1/5(1,2,3), 1/11(1,5,6)"));
    assert!(out.contains(" 0  120 120  0 "));
}

#[test]
fn orbifold_euler_of_x28() {
    let (code, out, _) = run(&[
        "euler",
        "--weights",
        "1,4,6,7,11",
        "--degrees",
        "28",
        "--orbifold",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("e_orb=-6385/66\n"), "{out}");
    assert!(out.contains("e=-94\n"));
}

#[test]
fn cascade_of_20523() {
    let cat = data();
    let (code, out, _) = run(&["cascade", "--grdb", "20523", "--catalog", cat.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("20523→20522→20521\ne=-30\nh21=17\n"), "{out}");
}

#[test]
fn multi_centre_cascade_lists_paths() {
    let (code, out, _) = run(&["cascade", "--grdb", "24097", "--family", "Tom1"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("disagree"));
}

#[test]
fn nodes_ad_hoc_and_catalogued() {
    let (code, out, _) = run(&[
        "nodes",
        "--weights",
        "1,1,1,1,1,2",
        "--degrees",
        "3,3",
        "--centre",
        "2,1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "1/2(1,1,1): nodes=9\n");
    let (_, out, _) = run(&["nodes", "--grdb", "20522", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["nodes"], 9);
    assert_eq!(v[0]["printed"], 9);
}

#[test]
fn moduli_anchor() {
    let (code, out, _) = run(&["moduli", "--grdb", "3508", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["h1t"], 34);
}

#[test]
fn hilbert_series_of_a_pfaffian() {
    let (code, out, _) = run(&[
        "hilb",
        "--weights",
        "1,1,1,1,1,2,3",
        "--pfaffian",
        "3,3,4,4,4",
        "--truncate",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "1 + 5t + 16t^2 + 39t^3 + O(t^4)\n");
}

#[test]
fn query_json_round_trips_through_the_schema() {
    let (code, out, _) = run(&["query", "--codim", "2", "--projection", "II1", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: Vec<FamilyRecord> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 10);
    let shipped = Catalog::shipped();
    for (line, r) in out.lines().zip(&rows) {
        assert_eq!(shipped.get(&r.key), Some(r));
        assert_eq!(serde_json::to_string(r).unwrap(), line);
    }
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    let (code, _, _) = run(&["hodge", "--weights", "1,1,1,1,1", "--degrees", "4", "--nonsense"]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn input_errors_exit_2() {
    // Not index 1.
    let (code, _, err) = run(&["hodge", "--weights", "1,1,1,1,1", "--degrees", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("index"), "{err}");
    let (code, _, _) = run(&["cascade", "--grdb", "999999"]);
    assert_eq!(code, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, "{\"grdb\": 1,}\n").unwrap();
    let (code, _, err) = run(&["verify", "--catalog", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn verify_exit_status_tracks_mismatches() {
    let (code, out, _) = run(&["verify"]);
    assert_eq!(code, 0, "{out}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.jsonl");
    let tampered = Catalog::shipped_source().replace(
        "\"expected\":{\"h21\":120,\"e\":-236",
        "\"expected\":{\"h21\":121,\"e\":-238",
    );
    fs::write(&path, tampered).unwrap();
    let (code, out, _) = run(&["verify", "--catalog", path.to_str().unwrap(), "--fields", "h21"]);
    assert_eq!(code, 1);
    assert!(out.contains("293"), "{out}");
}

#[test]
fn verify_output_is_independent_of_jobs() {
    let (_, a, _) = run(&["verify", "--format", "json", "--jobs", "1"]);
    let (_, b, _) = run(&["verify", "--format", "json", "--jobs", "4"]);
    let (_, c, _) = run(&["verify", "--format", "json"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn verify_writes_csv_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let (code, out, _) = run(&["verify", "--format", "csv", "--report", report.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("catalogue sha256 "));
    let csv = fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("grdb,field,computed,printed,status,method"));
    assert!(csv.contains("\n293,h21,120,120,match,griffiths\n"), "{csv}");
}

#[test]
fn persist_writes_and_reuses_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.jsonl");
    fs::copy(data(), &path).unwrap();
    let args = [
        "verify",
        "--catalog",
        path.to_str().unwrap(),
        "--persist",
        "--format",
        "json",
    ];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let results = dir.path().join("cat.results.jsonl");
    let stored = fs::read_to_string(&results).unwrap();
    assert_eq!(stored.lines().count(), 256);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    assert_eq!(fs::read_to_string(&results).unwrap(), stored);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_fanocalc"))
        .args(["euler", "--weights", "1,1,1,1,1", "--degrees", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "e=-56\nmethod=griffiths\n"
    );
    let out = Command::new(env!("CARGO_BIN_EXE_fanocalc"))
        .arg("nope")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}
