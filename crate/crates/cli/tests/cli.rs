use std::process::{Command, Output};

use serde_json::Value;
use severi_core::table::{render_rows, Format, TemplateRow, TemplatesDoc};

fn severi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_severi")).args(args).env_remove("SEVERI_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn empty_cogenus_gives_empty_table() {
    let o = severi(&["templates", "--delta", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn template_counts() {
    for (delta, n) in [(1, 2), (2, 7), (3, 26)] {
        let o = severi(&["templates", "--delta", &delta.to_string(), "--format", "csv"]);
        assert_eq!(stdout(&o).lines().count(), n + 1);
    }
}

#[test]
fn json_round_trips_byte_identically() {
    let o = severi(&["templates", "--delta", "3", "--format", "json"]);
    let text = stdout(&o);
    let doc: TemplatesDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.format_version, 1);
    let rows: Vec<TemplateRow> = doc.templates.iter().map(|r| r.recompute().unwrap()).collect();
    assert_eq!(render_rows(&rows, doc.delta, Format::Json).unwrap(), text);
}

#[test]
fn severi_values() {
    assert_eq!(stdout(&severi(&["severi", "--d", "4", "--delta", "1"])), "27\n");
    assert_eq!(stdout(&severi(&["severi", "--d", "3", "--delta", "1", "--method", "both"])), "12\n12\nmatch\n");
    let o = severi(&["severi", "--d", "5", "--delta", "3", "--method", "both", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(v["direct"], v["exp"]);
}

#[test]
fn polynomials() {
    let q1 = stdout(&severi(&["qpoly", "--delta", "1"]));
    assert!(q1.starts_with("3*d^2 - 6*d + 3\n"));
    let q2 = stdout(&severi(&["qpoly", "--delta", "2"]));
    assert!(q2.starts_with("-21*d^2 + 117/2*d - 75/2\n"));
    let o = severi(&["nodepoly", "--delta", "1", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["poly"], "3*d^2 - 6*d + 3");
    assert_eq!(v["coeffs"], serde_json::json!(["3", "-6", "3"]));
    assert!(v["threshold"].as_u64().unwrap() <= 1);
}

#[test]
fn series() {
    let o = severi(&["series", "a2", "--order", "2", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!(["2", "-39/2"]));
    assert_eq!(v["agree"], true);
    let o = severi(&["series", "a1", "--order", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "δ,[t^δ]A₁\n1,3\n2,-21\n");
}

#[test]
fn words() {
    let o = severi(&["words", "count", "--tau", "0-1:2", "--n", "4", "--t", "1", "--irreducible"]);
    assert_eq!(stdout(&o), "14\n");
    let o = severi(&["words", "count", "--tau", "{1}:2", "--n", "4", "--t", "1", "--irreducible"]);
    assert_eq!(stdout(&o), "14\n");
    let o = severi(&[
        "words", "fis", "--tau", "0-2:1", "--word", "s1 s0 s0 | s0", "--height=-1,0", "--format", "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["prefix"], "s1 s0 | s0");
    assert_eq!(v["rest"], "s0 |");
}

#[test]
fn exit_codes() {
    assert_eq!(severi(&["templates", "--delta", "5"]).status.code(), Some(3));
    assert_eq!(severi(&["templates", "--delta", "5", "--max-delta", "3"]).status.code(), Some(3));
    assert_eq!(severi(&["severi", "--d", "9", "--delta", "1"]).status.code(), Some(3));
    assert_eq!(severi(&["severi", "--d", "0", "--delta", "1"]).status.code(), Some(2));
    assert_eq!(severi(&["templates"]).status.code(), Some(2));
    assert_eq!(severi(&["words", "count", "--tau", "2-1:1", "--n", "1", "--t", "0"]).status.code(), Some(2));
    let o = severi(&["words", "count", "--tau", "0-1:2", "--n", "9", "--t", "1", "--budget", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_levels() {
    let o = severi(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    let o = severi(&["verify", "--perturb", "1/3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn cache_dir_is_populated_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_severi"))
            .args(["templates", "--delta", "2", "--format", "json"])
            .env("SEVERI_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(dir.path().join("templates-2.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, severi(&["templates", "--delta", "2", "--format", "json"]).stdout);
}
