use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use chronosynth::format::{automaton_json, parse_automaton};
use chronosynth_core::fixtures;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chronosynth"))
        .args(args)
        .env_remove("CHRONOSYNTH_CAP_SIGNATURES")
        .env_remove("CHRONOSYNTH_CAP_STRATEGIES")
        .env_remove("CHRONOSYNTH_CAP_ROUNDS")
        .env_remove("CHRONOSYNTH_CAP_HORIZON")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn fixture_files_match_builtin_specs() {
    let pairs = [
        ("psi_copy", fixtures::psi_copy()),
        ("psi_jump", fixtures::psi_jump()),
        ("psi_indet_rc", fixtures::psi_indet_rc()),
        ("psi_indet_fv", fixtures::psi_indet_fv()),
        ("psi_true", fixtures::psi_true()),
        ("psi_false", fixtures::psi_false()),
        ("predict_next", fixtures::predict_next()),
        ("toggle", fixtures::toggle()),
    ];
    for (name, spec) in pairs {
        let parsed = parse_automaton(&fs::read_to_string(fixture(name)).unwrap()).unwrap();
        assert_eq!(automaton_json(&parsed), automaton_json(&spec), "{name}");
    }
}

#[test]
fn monoid_of_one_state_spec() {
    let v = json(&["monoid", &fixture("one_state")]);
    assert_eq!(v["classes"], 2);
    assert_eq!(v["d_q"], 2);
    assert_eq!(v["idempotents"], 1);
    assert_eq!(v["up"], 1);
}

#[test]
fn discrete_verdicts() {
    let copy = json(&["solve-discrete", &fixture("psi_copy")]);
    assert_eq!(copy["machine"]["kind"], "mealy");
    let predict = json(&["solve-discrete", &fixture("predict_next")]);
    assert_eq!(predict["machine"]["kind"], "moore");
    let dot = run(&["solve-discrete", &fixture("psi_copy"), "--dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn synth_on_partial_spec_completes_to_sink() {
    let v = json(&["synth", &fixture("copy_partial"), "--semantics", "rc"]);
    assert_eq!(v["realizable"], true);
}

#[test]
fn synth_stats_and_jobs_agree() {
    let one = run(&["synth", &fixture("psi_jump"), "--semantics", "fv", "--stats"]);
    let four = run(&["synth", &fixture("psi_jump"), "--semantics", "fv", "--stats", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    let (a, b): (Value, Value) =
        (serde_json::from_slice(&one.stdout).unwrap(), serde_json::from_slice(&four.stdout).unwrap());
    assert_eq!(a["realizable"], b["realizable"]);
    assert_eq!(a["witness"], b["witness"]);
    assert_eq!(a["stats"]["arena_nodes"], 51);
    assert_eq!(a["stats"]["d_q"], 6);
}

#[test]
fn arena_exports() {
    let dot = run(&["arena", &fixture("psi_copy"), "--semantics", "rc", "--dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
    let v = json(&["arena", &fixture("psi_copy"), "--semantics", "fv", "--json"]);
    assert_eq!(v["semantics"], "fv");
    let nodes = v["nodes"].as_array().unwrap();
    assert!(!nodes.is_empty());
    for e in v["edges"].as_array().unwrap() {
        let to = e["to"].as_u64().unwrap() as usize;
        assert!(to < nodes.len());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["monoid", "/nonexistent.json"]).status.code(), Some(2));
    let junk = temp_file("junk.json", "{\"states\": 3}");
    assert_eq!(run(&["definable", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["--cap-signatures", "1", "monoid", &fixture("psi_copy")]).status.code(), Some(3));
    let capped = Command::new(env!("CARGO_BIN_EXE_chronosynth"))
        .args(["synth", &fixture("psi_jump"), "--semantics", "fv"])
        .env("CHRONOSYNTH_CAP_STRATEGIES", "1")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    // flags beat the environment
    let lifted = Command::new(env!("CARGO_BIN_EXE_chronosynth"))
        .args(["--cap-strategies", "1000", "synth", &fixture("psi_jump"), "--semantics", "fv"])
        .env("CHRONOSYNTH_CAP_STRATEGIES", "1")
        .output()
        .unwrap();
    assert_eq!(lifted.status.code(), Some(0));
    assert_eq!(run(&["--rounds", "3", "play", &fixture("psi_jump"), "--seed", "1"]).status.code(), Some(4));
    assert_eq!(run(&["--rounds", "0", "monoid", &fixture("psi_copy")]).status.code(), Some(2));
}

#[test]
fn random_plays_are_deterministic() {
    let args = ["play", &fixture("psi_jump"), "--semantics", "fv", "--rounds", "40", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn transcripts_replay_as_scripts() {
    for (spec, sem, seed) in
        [("psi_copy", "rc", "3"), ("psi_copy", "fv", "5"), ("psi_jump", "fv", "1"), ("toggle", "rc", "2")]
    {
        let first = run(&["play", &fixture(spec), "--semantics", sem, "--rounds", "24", "--seed", seed]);
        let text = String::from_utf8(first.stdout).unwrap();
        let script = temp_file(&format!("replay_{spec}_{sem}.txt"), &text);
        let again =
            run(&["play", &fixture(spec), "--semantics", sem, "--rounds", "24", "--script", script.to_str().unwrap()]);
        assert_eq!(first.status.code(), again.status.code(), "{spec} {sem}");
        assert_eq!(text, String::from_utf8(again.stdout).unwrap(), "{spec} {sem}");
    }
}

#[test]
fn illegal_script_lines_are_rejected() {
    let at_start = temp_file("early.txt", "choose 1\ninterrupt 0 0\n");
    let out = run(&["play", &fixture("psi_copy"), "--semantics", "rc", "--script", at_start.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let garbage = temp_file("garbage.txt", "choose 1\nfly away\n");
    let out = run(&["play", &fixture("psi_copy"), "--semantics", "rc", "--script", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scripted_win_by_acceptance() {
    let script = temp_file("accept.txt", "choose 1\naccept\n");
    let out = run(&["play", &fixture("psi_copy"), "--semantics", "rc", "--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("outcome: winner=O reason=accepted_final\n"), "{text}");
}

#[test]
fn check_fixtures_passes() {
    let out = run(&["--seed", "4", "check-fixtures"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn output_flag_writes_file() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let dest = dir.join("definable_out.json");
    let out = run(&["-o", dest.to_str().unwrap(), "definable", &fixture("psi_jump")]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(dest).unwrap()).unwrap();
    assert_eq!(v["definable"], false);
}
