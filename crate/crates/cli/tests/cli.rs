use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn group(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/groups").join(format!("{name}.json"))
}

fn ctbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctbl")).args(args).output().expect("binary runs")
}

fn ctbl_ok(args: &[&str]) -> String {
    let out = ctbl(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ctbl_ok(args)).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn degrees(table: &Value) -> Vec<String> {
    table["irreducibles"].as_array().unwrap().iter().map(|row| row[0].as_str().unwrap().to_string()).collect()
}

#[test]
fn header_class_data() {
    let h = json(&["header", s(&group("S3"))]);
    assert_eq!(h["classes"].as_array().unwrap().len(), 3);

    let h = json(&["header", s(&group("S4"))]);
    let mut cent: Vec<u64> =
        h["classes"].as_array().unwrap().iter().map(|c| c["centralizer_order"].as_u64().unwrap()).collect();
    cent.sort();
    assert_eq!(cent, vec![3, 4, 4, 8, 24]);

    let h = json(&["header", s(&group("A5"))]);
    let fives = h["classes"].as_array().unwrap().iter().filter(|c| c["order"] == 5).count();
    assert_eq!(fives, 2);
    assert!(h["powermap"]["5"].is_array());
}

#[test]
fn unreadable_group_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"degree\": 3, \"generators\": [[0, 0, 1]]}").unwrap();
    assert_eq!(ctbl(&["header", s(&bad)]).status.code(), Some(1));
    assert_eq!(ctbl(&["header", s(&dir.path().join("missing.json"))]).status.code(), Some(1));
}

#[test]
fn irr_small_groups() {
    let t = json(&["irr", s(&group("S4"))]);
    assert_eq!(degrees(&t), vec!["1", "1", "2", "3", "3"]);
    assert_eq!(t["found"], t["expected"]);

    let t = json(&["irr", s(&group("C6"))]);
    assert_eq!(degrees(&t), vec!["1"; 6]);
    assert!(t["irreducibles"].to_string().contains("E(6)") || t["irreducibles"].to_string().contains("E(3)"));

    let t = json(&["irr", s(&group("A5"))]);
    assert_eq!(degrees(&t), vec!["1", "3", "3", "4", "5"]);
    assert!(t["irreducibles"].to_string().contains("E(5)"));
}

#[test]
fn brauer_matches_oracle_on_corpus() {
    for name in ["S3", "S4", "A4", "A5", "S5", "D8", "Q8", "SL_2_3", "C6", "C2xC4", "2_4_A5", "Syl2_S8"] {
        let path = group(name);
        let brauer = ctbl_ok(&["irr", s(&path), "--method", "brauer"]);
        let oracle = ctbl_ok(&["irr", s(&path), "--method", "oracle"]);
        assert_eq!(brauer, oracle, "{name}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    let path = group("Syl2_S8");
    let one = ctbl_ok(&["irr", s(&path), "--jobs", "1"]);
    let four = ctbl_ok(&["irr", s(&path), "--jobs", "4"]);
    assert_eq!(one, four);
}

#[test]
fn hybrid_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("pres.json");
    ctbl_ok(&["hybrid", s(&group("S4")), "--seed", "(0 1)(2 3)", "-o", s(&pres)]);
    let out = ctbl_ok(&["verify", s(&pres), s(&group("S4"))]);
    assert!(out.starts_with("verified"));

    // 2^4:A5 has a nontrivial quotient; corrupting a tail must be caught
    let pres = dir.path().join("affine.json");
    ctbl_ok(&["hybrid", s(&group("2_4_A5")), "-o", s(&pres)]);
    ctbl_ok(&["verify", s(&pres), s(&group("2_4_A5"))]);
    let mut rec: Value = serde_json::from_str(&std::fs::read_to_string(&pres).unwrap()).unwrap();
    assert!(!rec["quotient_relators"].as_array().unwrap().is_empty());
    rec["tails"][0] = Value::from("g1");
    std::fs::write(&pres, rec.to_string()).unwrap();
    let out = ctbl(&["verify", s(&pres), s(&group("2_4_A5"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("relator 0"));

    // abelian input: PC relators only
    let rec: Value = serde_json::from_str(&ctbl_ok(&["hybrid", s(&group("C2xC4"))])).unwrap();
    assert!(rec["quotient_relators"].as_array().unwrap().is_empty());
    assert!(rec["action"].as_array().unwrap().is_empty());
    assert!(!rec["pc_relators"].as_array().unwrap().is_empty());
}

#[test]
fn hybrid_rejects_bad_seed() {
    let out = ctbl(&["hybrid", s(&group("S4")), "--seed", "(0 1)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("elementary abelian"));
}

#[test]
fn worker_segments_merge_to_single_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = group("D8");
    let run = |workers: usize, prefix: &str| -> Vec<u8> {
        let plan = d.join(format!("{prefix}-plan.json"));
        std::fs::write(&plan, ctbl_ok(&["pgroup-pairs", s(&g), "--workers", &workers.to_string()])).unwrap();
        let mut segs = Vec::new();
        for w in 0..workers {
            let seg = d.join(format!("{prefix}-{w}.ctbl"));
            ctbl_ok(&["pgroup-worker", s(&g), "--assignment", s(&plan), "--worker", &w.to_string(), "-o", s(&seg)]);
            segs.push(seg);
        }
        let out = d.join(format!("{prefix}.ctbl"));
        let mut args = vec!["merge", "-o", s(&out)];
        args.extend(segs.iter().map(|p| s(p)));
        ctbl_ok(&args);
        std::fs::read(out).unwrap()
    };
    assert_eq!(run(1, "one"), run(4, "four"));
    let text = ctbl_ok(&["export", s(&d.join("four.ctbl"))]);
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn store_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ctbl"))
        .args(["irr", s(&group("Q8")), "--store", "q8.ctbl"])
        .env("CTBL_STORE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = Command::new(env!("CARGO_BIN_EXE_ctbl"))
        .args(["export", "q8.ctbl"])
        .env("CTBL_STORE_DIR", dir.path())
        .output()
        .unwrap();
    let text = String::from_utf8(text.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().any(|l| l.starts_with("2,-2,")));
}
