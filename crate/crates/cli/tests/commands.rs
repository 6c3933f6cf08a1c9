use std::io::Write;
use std::process::Command;

use chainmod_cli::InstanceFile;
use serde_json::Value;

const INSTANCE: &str = r#"{"ring":{"p":2,"e":2},"objects":[
 {"name":"cyclic","exponents":[2],"chain":[[[2]]]},
 {"name":"split","exponents":[1,1],"chain":[[[1,0]]]},
 {"name":"low","exponents":[1],"chain":[[[1]]]},
 {"name":"padding","exponents":[1],"chain":[[]]},
 {"name":"padded","exponents":[1,1],"chain":[[[1,0]]]},
 {"name":"square","exponents":[1,1],"chain":[[[0,1]]]}
]}"#;

fn instance(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chainmod")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = if stdout.trim().is_empty() { Value::Null } else { serde_json::from_str(&stdout).unwrap() };
    (out.status.code().unwrap(), report, String::from_utf8(out.stderr).unwrap())
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn validate_reports_each_object() {
    let f = instance(INSTANCE);
    let (code, rep, _) = run(&["validate", path(&f)]);
    assert_eq!(code, 0);
    let objs = rep["result"]["objects"].as_array().unwrap();
    assert_eq!(objs.len(), 6);
    assert_eq!(objs[0]["in_un"], true);
    assert_eq!(objs[2]["in_un"], false);
    assert_eq!(objs[2]["factors"][1], "zero");
    assert_eq!(rep["findings"].as_array().unwrap().len(), 0);
}

#[test]
fn validate_flags_a_decreasing_chain() {
    let text = r#"{"ring":{"p":2,"e":2},"objects":[
      {"name":"ok","exponents":[2],"chain":[[[2]]]},
      {"name":"down","exponents":[2],"chain":[[[1]],[[2]]]}]}"#;
    let f = instance(text);
    let (code, rep, _) = run(&["validate", path(&f)]);
    assert_eq!(code, 2);
    let objs = rep["result"]["objects"].as_array().unwrap();
    assert_eq!(objs[0]["valid"], true);
    assert_eq!(objs[1]["valid"], false);
    assert_eq!(objs[1]["level"], 2);
}

#[test]
fn malformed_input_exits_with_input_error() {
    let dup = instance(r#"{"ring":{"p":2,"e":2},"objects":[
      {"name":"a","exponents":[1],"chain":[]},{"name":"a","exponents":[1],"chain":[]}]}"#);
    let (code, rep, err) = run(&["validate", path(&dup)]);
    assert_eq!((code, rep), (2, Value::Null));
    assert!(err.contains("duplicate"));
    let (code, _, _) = run(&["validate", "/nonexistent/file.json"]);
    assert_eq!(code, 2);
    let bad_ring = instance(r#"{"ring":{"p":4,"e":2},"objects":[]}"#);
    assert_eq!(run(&["validate", path(&bad_ring)]).0, 2);
    let f = instance(INSTANCE);
    assert_eq!(run(&["classes", path(&f), "cyclic", "missing"]).0, 2);
}

#[test]
fn normalization_is_idempotent() {
    let file = InstanceFile::parse(INSTANCE).unwrap();
    let once = file.normalized().unwrap();
    let text = serde_json::to_string(&once).unwrap();
    let twice = InstanceFile::parse(&text).unwrap().normalized().unwrap();
    assert_eq!(once, twice);
    assert_eq!(text, serde_json::to_string(&twice).unwrap());
}

fn grid(rep: &Value) -> Vec<(bool, bool)> {
    rep["result"]["grid"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["mono"].as_bool().unwrap(), c["epi"].as_bool().unwrap()))
        .collect()
}

#[test]
fn class_grids() {
    let f = instance(INSTANCE);
    let (code, rep, _) = run(&["classes", path(&f), "cyclic", "cyclic"]);
    assert_eq!(code, 0);
    assert_eq!(grid(&rep), vec![(true, true), (true, true)]);
    let (_, rep, _) = run(&["classes", path(&f), "cyclic", "split"]);
    assert!(!grid(&rep)[0].0);
    // The padded sum keeps the class of the object where its factor is
    // nonzero and takes the class of the padding where it vanishes.
    let (_, rep, _) = run(&["classes", path(&f), "padded", "low"]);
    assert_eq!(grid(&rep), vec![(true, true), (false, false)]);
    let (_, rep, _) = run(&["classes", path(&f), "padded", "padding"]);
    assert_eq!(grid(&rep), vec![(false, false), (true, true)]);
    let (_, rep, _) = run(&["classes", path(&f), "padded", "square"]);
    assert_eq!(grid(&rep)[1], (true, true));
}

#[test]
fn endo_reports_and_caps() {
    let f = instance(INSTANCE);
    let (code, rep, _) = run(&["endo", path(&f), "cyclic"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["ring_order"], 4);
    assert_eq!(rep["result"]["radical_order"], 2);
    assert_eq!(rep["result"]["semisimple"]["k"], 1);
    assert_eq!(rep["result"]["level_ideals"].as_array().unwrap().len(), 4);
    let (code, rep, _) = run(&["endo", path(&f), "split"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["semisimple"]["k"], 2);
    let (code, _, err) = run(&["endo", path(&f), "split", "--endo-cap", "2"]);
    assert_eq!(code, 3);
    assert!(err.contains("cap"));

    let trivial = instance(r#"{"ring":{"p":3,"e":1},"objects":[{"name":"zero","exponents":[],"chain":[[]]}]}"#);
    let (code, rep, _) = run(&["endo", path(&trivial), "zero"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["ring_order"], 1);
    assert_eq!(rep["result"]["semisimple"]["k"], 0);
}

#[test]
fn decide_and_cross_check() {
    let f = instance(INSTANCE);
    let (code, rep, _) = run(&["decide", path(&f), "--lhs", "cyclic,split", "--rhs", "split,cyclic", "--cross-check"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["decision"]["verdict"], "iso");
    assert_eq!(rep["result"]["oracle"]["type"], "iso");

    let (code, rep, _) = run(&["decide", path(&f), "--lhs", "cyclic", "--rhs", "split", "--cross-check"]);
    assert_eq!(code, 0);
    let failure = &rep["result"]["decision"]["failure"];
    assert_eq!((failure["type"].as_str(), failure["level"].as_u64(), failure["kind"].as_str()), (Some("class_count"), Some(1), Some("mono")));

    let (code, rep, _) = run(&["decide", path(&f), "--lhs", "padded", "--rhs", "low,padding", "--general", "--cross-check"]);
    assert_eq!(code, 0);
    let d = &rep["result"]["decision"];
    assert_eq!((d["verdict"].as_str(), d["r"].as_u64(), d["s"].as_u64()), (Some("iso"), Some(1), Some(2)));

    let (code, _, err) = run(&["decide", path(&f), "--lhs", "low", "--rhs", "low"]);
    assert_eq!(code, 2);
    assert!(err.contains("not in U_n"));

    let (code, rep, _) =
        run(&["decide", path(&f), "--lhs", "cyclic", "--rhs", "cyclic", "--cross-check", "--flip-verdict"]);
    assert_eq!(code, 1);
    assert_eq!(rep["findings"].as_array().unwrap().len(), 1);

    let (code, rep, _) = run(&["decide", path(&f), "--lhs", "cyclic,split", "--rhs", "split,cyclic", "--cross-check", "--oracle-cap", "2"]);
    assert_eq!(code, 3);
    assert_eq!(rep["result"]["oracle"], "cap_exceeded");
}

#[test]
fn oracle_extracts_permutations() {
    let f = instance(INSTANCE);
    let (code, rep, _) = run(&["oracle", path(&f), "--lhs", "cyclic,split", "--rhs", "split,cyclic"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["outcome"]["type"], "iso");
    let digraphs = rep["result"]["digraphs"].as_array().unwrap();
    assert_eq!(digraphs.len(), 4);
    for d in digraphs {
        assert_eq!(d["permutation"], serde_json::json!([[0, 1], [1, 0]]));
    }
    let (code, rep, _) = run(&["oracle", path(&f), "--lhs", "cyclic", "--rhs", "split"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["outcome"]["type"], "no_iso");
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn sweep_replays_and_catches_the_mutant() {
    let args = ["sweep", "--count", "6", "--seed", "11"];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(a["findings"].as_array().unwrap().len(), 0);
    let (_, b, _) = run(&args);
    assert_eq!(without_timing(a), without_timing(b));

    let (code, rep, _) = run(&["sweep", "--count", "2", "--inject-mutant"]);
    assert_eq!(code, 1);
    assert!(!rep["findings"].as_array().unwrap().is_empty());
}

#[test]
fn swap_search_reports_examples() {
    let (code, rep, _) = run(&["swap-search", "--count", "16", "--max-order", "16", "--seed", "3"]);
    assert_eq!(code, 0);
    let examples = rep["result"]["examples"].as_array().unwrap();
    for e in examples {
        assert_ne!(e["oracle_confirmed"], false);
        assert_eq!(e["objects"].as_array().unwrap().len(), 4);
    }
}
