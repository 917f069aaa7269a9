use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bcfw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcfw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn enumerate_counts_and_order() {
    let o = bcfw(&["enumerate", "--n", "8", "--k", "2"]);
    assert!(o.status.success());
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 20);
    assert_eq!(lines[0]["chords"], serde_json::json!([[1, 3], [3, 5]]));
    let all = json_lines(&bcfw(&["enumerate", "--n", "7"]));
    assert_eq!(all.len(), 1 + 6 + 6 + 1);
}

#[test]
fn three_chord_diagram_to_permutation() {
    let o = bcfw(&["convert", "--to", "perm", "--format", "text", "n=14; 1-11, 3-6, 8-10"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 2 3 4 5 6 7 8 9 10 11 12 13 14\n2 11 4 6 5 7 1 9 10 12 3 14 13 8\n");
    let j = json_lines(&bcfw(&["convert", "--to", "perm", r#"{"n":14,"chords":[[1,11],[3,6],[8,10]]}"#]));
    assert_eq!(j[0]["anti_excedances"], serde_json::json!([1, 3, 8]));
}

#[test]
fn conversions_round_trip_through_stdin() {
    let d = "n=9; 1-5, 2-4, 5-7";
    let mut cur = d.to_string();
    for to in ["perm", "walks", "oplus", "diagram"] {
        let mut child = Command::new(env!("CARGO_BIN_EXE_bcfw"))
            .args(["convert", "--to", to, "--format", "json"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(cur.as_bytes()).unwrap();
        let o = child.wait_with_output().unwrap();
        assert!(o.status.success(), "{to}: {}", String::from_utf8_lossy(&o.stderr));
        cur = stdout(&o);
    }
    let back = bcfw(&["convert", "--to", "diagram", "--format", "text", cur.trim()]);
    assert_eq!(stdout(&back).trim(), d);
}

#[test]
fn unknown_permutation_is_an_error() {
    let o = bcfw(&["convert", "--to", "diagram", "[2,1,4,3,6,5]"]);
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(e["error"].as_str().unwrap().contains("no BCFW cell"));
}

#[test]
fn verify_small_scope_passes() {
    let o = bcfw(&["verify", "--n", "6", "--k", "1", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 12);
    assert!(lines[..11].iter().all(|l| l["passed"] == true));
    assert_eq!(lines[11]["passed"], true);
}

#[test]
fn verify_selected_criteria_only() {
    let o = bcfw(&["verify", "--n", "5", "--criteria", "1,2", "--format", "text"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 3);
    assert!(s.lines().next().unwrap().starts_with("[PASS]  1 cell counts"));
}

#[test]
fn separate_is_deterministic() {
    let a = bcfw(&["separate", "--n", "6"]);
    let b = bcfw(&["separate", "--n", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines = json_lines(&a);
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l["sign_a"].as_i64().unwrap() * l["sign_b"].as_i64().unwrap() == -1));
}

#[test]
fn invert_recovers_samples() {
    let o = bcfw(&["invert", "--diagram", "n=8; 1-6, 2-4", "--samples", "2", "--zs", "2"]);
    assert!(o.status.success());
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l["recovered"] == true));
    let v = bcfw(&["invert", "--diagram", "n=8; 1-6, 2-4", "--nodes", "1,2,3,4,5,6,7,17/2"]);
    assert!(v.status.success());
}

#[test]
fn sample_and_boundaries_emit_json() {
    let s = json_lines(&bcfw(&["sample", "--diagram", "n=7; 1-3, 3-5", "--samples", "3", "--direct"]));
    assert_eq!(s.len(), 3);
    let b = json_lines(&bcfw(&["boundaries", "--n", "7", "--k", "2"]));
    assert_eq!(b.len(), 6);
    assert!(b.iter().all(|l| l["boundaries"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x["class"] == "sa" || x["class"] == "paired")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bcfw(&["enumerate", "--bogus"]).status.code(), Some(2));
    assert_eq!(bcfw(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bcfw(&["convert", "--to", "nothing", "x"]).status.code(), Some(2));
}

#[test]
fn bad_values_exit_one() {
    assert_eq!(bcfw(&["enumerate", "--n", "3"]).status.code(), Some(1));
    assert_eq!(bcfw(&["sample", "--diagram", "n=6; 1-7"]).status.code(), Some(1));
}
