use std::path::PathBuf;
use std::process::{Command, Output};

use catgram::fixtures;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_catgram");

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Workspace { dir: tempfile::tempdir().unwrap() };
        ws.json("g_ab.json", &fixtures::g_ab());
        ws.json("g_amb.json", &fixtures::g_amb());
        ws.json("g_eps.json", &fixtures::g_eps());
        ws.json("m_evena.json", &fixtures::m_evena());
        ws.json("spc.json", &fixtures::spc_sample());
        ws.json("sample.json", &fixtures::sample_tree());
        let gbin = catgram::grammar::bilinearize(&fixtures::g_ab()).unwrap().grammar;
        ws.json("g_ab_bin.json", &gbin);
        ws.text("classical.txt", "S -> a S b | a b\n");
        ws.text("broken.json", "{\"category\": ");
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn json<T: serde::Serialize>(&self, name: &str, v: &T) {
        std::fs::write(self.path(name), serde_json::to_string_pretty(v).unwrap()).unwrap();
    }

    fn text(&self, name: &str, s: &str) {
        std::fs::write(self.path(name), s).unwrap();
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN).current_dir(self.dir.path()).args(args).output().unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn parse_member_word() {
    let ws = Workspace::new();
    let o = ws.run(&["parse", "-g", "g_ab.json", "-w", "aabb"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["member"], true);
    assert_eq!(v["count"], 1);
    assert_eq!(v["nonterminals"], serde_json::json!(["S"]));
    assert_eq!(v["parses"].as_array().unwrap().len(), 1);
}

#[test]
fn parse_non_member_exits_one() {
    let ws = Workspace::new();
    let o = ws.run(&["parse", "-g", "g_ab.json", "-w", "abab"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["member"], false);
}

#[test]
fn parse_counts_and_limits() {
    let ws = Workspace::new();
    let o = ws.run(&["parse", "-g", "g_amb.json", "-w", "aaaaa", "--limit", "3"]);
    let v = stdout_json(&o);
    assert_eq!(v["count"], 14);
    assert_eq!(v["parses"].as_array().unwrap().len(), 3);
    let direct = ws.run(&["parse", "-g", "g_amb.json", "-w", "aaaaa", "--strategy", "direct"]);
    assert_eq!(stdout_json(&direct)["count"], 14);
}

#[test]
fn parse_json_word_and_empty_word() {
    let ws = Workspace::new();
    let o = ws.run(&["parse", "-g", "g_ab.json", "-w", r#"["a","b"]"#]);
    assert_eq!(code(&o), 0);
    let o = ws.run(&["parse", "-g", "g_eps.json", "-w", ""]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["count"], 1);
}

#[test]
fn input_errors_exit_two() {
    let ws = Workspace::new();
    let o = ws.run(&["parse", "-g", "g_ab.json", "-w", "xz"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown generator"));

    let o = ws.run(&["validate", "-g", "broken.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"), "location diagnostics");

    assert_eq!(code(&ws.run(&["validate", "-g", "missing.json"])), 2);
    assert_eq!(code(&ws.run(&["no-such-command"])), 2);
}

#[test]
fn validate_reports_properties() {
    let ws = Workspace::new();
    let o = ws.run(&["validate", "-g", "g_ab.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["valid"], true);

    let mut bad = serde_json::to_value(fixtures::g_ab()).unwrap();
    bad["rules"][0]["splice"] = serde_json::json!([["a"]]);
    ws.json("bad.json", &bad);
    let o = ws.run(&["validate", "-g", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["valid"], false);
}

#[test]
fn classical_text_input() {
    let ws = Workspace::new();
    let o = ws.run(&["enumerate", "-g", "classical.txt", "--max-len", "6", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "ab\naabb\naaabbb\n");
}

#[test]
fn enumerate_automaton() {
    let ws = Workspace::new();
    let o = ws.run(&["enumerate", "-a", "m_evena.json", "--max-len", "2"]);
    let words: Vec<String> = serde_json::from_value(stdout_json(&o)).unwrap();
    assert_eq!(words, ["", "b", "aa", "bb"]);
}

#[test]
fn intersect_emits_grammars() {
    let ws = Workspace::new();
    let o = ws.run(&["intersect", "-g", "g_ab.json", "-a", "m_evena.json"]);
    assert_eq!(code(&o), 0);
    ws.text("inter.json", &String::from_utf8(o.stdout).unwrap());
    let o = ws.run(&["enumerate", "-g", "inter.json", "--max-len", "8", "--format", "text"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "aabb\naaaabbbb\n");

    let pb = stdout_json(&ws.run(&["intersect", "-g", "g_ab.json", "-a", "m_evena.json", "--emit", "pullback"]));
    assert_eq!(pb["start"], "(e,S,e)");
    let raw = stdout_json(&ws.run(&[
        "intersect", "-g", "g_ab.json", "-a", "m_evena.json", "--emit", "pullback", "--untrimmed",
    ]));
    assert!(raw["rules"].as_array().unwrap().len() > pb["rules"].as_array().unwrap().len());
}

#[test]
fn check_equiv_exit_codes() {
    let ws = Workspace::new();
    let o = ws.run(&["check-equiv", "-g1", "g_ab.json", "-g2", "g_ab_bin.json", "--max-len", "8"]);
    assert_eq!(code(&o), 0);
    let o = ws.run(&["check-equiv", "--g1", "g_ab.json", "--g2", "classical.txt", "--max-len", "8"]);
    assert_eq!(code(&o), 0);
    let o = ws.run(&["check-equiv", "-g1", "g_ab.json", "-g2", "g_eps.json", "--max-len", "8"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["counterexample"], "");
}

#[test]
fn contour_and_dyck_round_trip() {
    let ws = Workspace::new();
    let o = ws.run(&["contour", "-s", "spc.json", "-t", "sample.json"]);
    let corners: Vec<String> = serde_json::from_value(stdout_json(&o)["corners"].clone()).unwrap();
    assert_eq!(corners.join(""), "a_0b_0a_1c_0d_0c_1e_0c_2a_2f_0g_0f_1a_3");

    let enc = stdout_json(&ws.run(&["dyck", "-s", "spc.json", "--encode", "-t", "sample.json"]));
    assert_eq!(enc["letters"].as_array().unwrap().len(), 26);
    assert_eq!(enc["balanced"], true);
    ws.json("letters.json", &enc["letters"]);
    let dec = stdout_json(&ws.run(&["dyck", "-s", "spc.json", "--decode", "letters.json"]));
    assert_eq!(dec["corners"], serde_json::json!(corners));

    ws.json("contour.json", &serde_json::json!(corners));
    let enc2 = stdout_json(&ws.run(&["dyck", "-s", "spc.json", "--encode", "--contour", "contour.json"]));
    assert_eq!(enc2, enc);
}

#[test]
fn cs_decompose_check() {
    let ws = Workspace::new();
    let o = ws.run(&["cs-decompose", "-g", "g_amb.json", "--check-bound", "5"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["check"]["holds"], true);
    assert_eq!(v["check"]["language"], v["check"]["decomposed"]);
}

#[test]
fn bilinearize_output_is_bilinear() {
    let ws = Workspace::new();
    let o = ws.run(&["bilinearize", "-g", "g_ab.json"]);
    ws.text("bin.json", &String::from_utf8(o.stdout).unwrap());
    let g: catgram::grammar::Grammar = serde_json::from_str(&std::fs::read_to_string(ws.path("bin.json")).unwrap()).unwrap();
    assert!(g.properties().bilinear);
}

/// Every command, run twice, prints identical bytes.
fn all_commands() -> Vec<Vec<&'static str>> {
    vec![
        vec!["validate", "-g", "g_ab.json"],
        vec!["parse", "-g", "g_amb.json", "-w", "aaaa"],
        vec!["enumerate", "-g", "g_amb.json", "--max-len", "5"],
        vec!["enumerate", "-a", "m_evena.json", "--max-len", "4"],
        vec!["intersect", "-g", "g_ab.json", "-a", "m_evena.json", "--emit", "pullback"],
        vec!["intersect", "-g", "g_ab.json", "-a", "m_evena.json", "--emit", "image"],
        vec!["bilinearize", "-g", "g_amb.json"],
        vec!["contour", "-s", "spc.json", "-t", "sample.json"],
        vec!["dyck", "-s", "spc.json", "--encode", "-t", "sample.json"],
        vec!["cs-decompose", "-g", "g_ab.json", "--check-bound", "6"],
        vec!["check-equiv", "-g1", "g_ab.json", "-g2", "g_ab_bin.json", "--max-len", "6"],
    ]
}

#[test]
fn byte_reproducible() {
    let a = Workspace::new();
    let b = Workspace::new();
    for args in all_commands() {
        let x = a.run(&args);
        let y = b.run(&args);
        assert_eq!(code(&x), code(&y), "{args:?}");
        assert_eq!(x.stdout, y.stdout, "{args:?}");
        assert!(!x.stdout.is_empty(), "{args:?}");
    }
}

