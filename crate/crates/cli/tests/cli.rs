use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_graph-entropy"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // the child may exit before reading its input
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn lp_variables(text: &str, prefix: &str) -> usize {
    let mut names: Vec<&str> = text
        .split(|c: char| c.is_whitespace())
        .filter(|t| t.starts_with(prefix))
        .collect();
    names.sort_unstable();
    names.dedup();
    names.len()
}

#[test]
fn bounds_of_pentagon() {
    let out = run(&["bounds", "--graph", "-"], "DLo");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "bounds");
    assert_eq!(v["result"]["bracket"]["lower"], "5/2");
    assert_eq!(v["result"]["bracket"]["upper"], "5/2");
    assert_eq!(v["result"]["bracket"]["exact"], true);
    assert!(v.get("timing").is_none());
}

#[test]
fn edge_list_and_arc_list_inputs() {
    let v = json(&run(&["bounds", "--graph", "-"], "5; 1-2,2-3,3-4,4-5,5-1"));
    assert_eq!(v["result"]["bracket"]["lower"], "5/2");
    // directed triangle: one vertex breaks every cycle
    let v = json(&run(&["bounds", "--graph", "-"], "3; 1->2,2->3,3->1"));
    assert_eq!(v["result"]["bracket"]["upper"], "1");
    assert_eq!(v["input"]["directed"], true);
}

#[test]
fn guess_on_triangle() {
    let v = json(&run(&["guess", "--graph", "-", "--q", "2"], "Bw"));
    assert_eq!(v["result"]["code_size"], 4);
    assert_eq!(v["result"]["code"].as_array().unwrap().len(), 4);
    let v = json(&run(&["guess", "--graph", "-", "--q", "3"], "Bw"));
    assert_eq!(v["result"]["code_size"], 9);
}

#[test]
fn reduce_and_minimal_check() {
    let v = json(&run(&["reduce", "--graph", "-"], "A_"));
    assert_eq!(v["result"]["reducible"], true);
    assert_eq!(v["result"]["remainder_graph6"], "?");
    let v = json(&run(&["reduce", "--graph", "-"], "DLo"));
    assert_eq!(v["result"]["reducible"], false);
    let v = json(&run(&["minimal-check", "--graph", "-"], "DLo"));
    assert_eq!(v["result"]["candidate"], true);
}

#[test]
fn lp_dump_sizes() {
    let out = run(&["lp-dump", "--graph", "-", "--which", "shannon"], "DLo");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("Maximize\n obj: h_1_2_3_4_5\n"));
    // 31 nonempty sets plus h_ for the empty set
    assert_eq!(lp_variables(&text, "h_"), 32);

    let out = run(&["lp-dump", "--graph", "-", "--which", "fractional-cover"], "A_");
    assert_eq!(lp_variables(&String::from_utf8(out.stdout).unwrap(), "w_"), 1);

    let out = run(&["lp-dump", "--graph", "-", "--which", "shannon"], "F@U^?");
    assert_eq!(lp_variables(&String::from_utf8(out.stdout).unwrap(), "h_"), 128);
}

#[test]
fn survey_small() {
    let v = json(&run(&["survey", "--n", "4", "--summary"], ""));
    assert_eq!(v["result"]["graphs"], 1 + 2 + 4 + 11);
    assert_eq!(v["result"]["values"], serde_json::json!(["0", "1", "2", "3"]));
    assert!(v["result"]["records"].as_array().unwrap().is_empty());
    let v = json(&run(&["survey", "--n", "4", "--connected"], ""));
    assert_eq!(v["result"]["graphs"], 1 + 1 + 2 + 6);
}

#[test]
fn survey_uses_cache_directory() {
    let dir = std::env::temp_dir().join(format!("graph-entropy-cli-{}", std::process::id()));
    let path = dir.to_str().unwrap();
    let first = run(&["survey", "--n", "4", "--cache", path], "");
    let second = run(&["survey", "--n", "4", "--cache", path], "");
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 10);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let a = run(&["bounds", "--graph", "-"], "F@U^?");
    let b = run(&["bounds", "--graph", "-"], "F@U^?");
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["verify", "--suite", "wheel"], "");
    let b = run(&["verify", "--suite", "wheel", "--jobs", "1"], "");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let v = json(&run(&["bounds", "--graph", "-", "--timing"], "A_"));
    assert!(v["timing"]["seconds"].is_number());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(2));
    assert_eq!(run(&["bounds", "--graph", "/no/such/file"], "").status.code(), Some(2));
    assert_eq!(run(&["bounds", "--graph", "-"], "not a graph!").status.code(), Some(2));
    assert_eq!(run(&["guess", "--graph", "-", "--q", "1"], "A_").status.code(), Some(2));
    assert_eq!(run(&["survey", "--n", "8"], "").status.code(), Some(2));

    let c11 = "11; 1-2,2-3,3-4,4-5,5-6,6-7,7-8,8-9,9-10,10-11,11-1";
    let out = run(&["bounds", "--graph", "-"], c11);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--shannon-cap"));
    let out = run(&["lp-dump", "--graph", "-", "--which", "shannon"], c11);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["guess", "--graph", "-", "--q", "2", "--word-cap", "16"], "DLo");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_suite_exits_one() {
    // 11/3 needs seven vertices, so the theorem suite fails below that
    let out = run(&["verify", "--suite", "theorem2", "--n", "6"], "");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["passed"], false);
}
