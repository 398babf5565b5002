use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn rospace(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rospace")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = rospace(&a);
    let text = if out.is_empty() { err } else { out };
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(v["rospace_format"], 1);
    (code, v)
}

#[test]
fn dims_example() {
    let (code, v) = json(&["dims", "--n", "2", "--factors", "1"]);
    assert_eq!(code, 0);
    assert_eq!((v["V"].as_i64(), v["E"].as_i64()), (Some(2), Some(2)));
    assert_eq!((v["dim_cv"].as_i64(), v["dim_spine"].as_i64()), (Some(1), Some(1)));
}

#[test]
fn dims_from_a_system_file() {
    let (code, v) = json(&["dims", "-s", &fixture("boundary-3-1")]);
    assert_eq!(code, 0);
    assert_eq!((v["V"].as_i64(), v["E"].as_i64()), (Some(4), Some(5)));
}

#[test]
fn index_of_t1() {
    let (code, v) = json(&["index", "--tree", &fixture("t1")]);
    assert_eq!(code, 0);
    assert_eq!(v["total"], 2);
    assert_eq!(v["equality"], true);
}

#[test]
fn converge_is_zero_past_four() {
    let (code, v) = json(&["converge", "--n-max", "8", "--ball", "4"]);
    assert_eq!(code, 0);
    for row in v["rows"].as_array().unwrap() {
        let n = row["n"].as_i64().unwrap();
        let max = row["to_rose"]["max"].as_str().unwrap();
        if n > 4 {
            assert_eq!(max, "0", "N = {n}");
        }
        if n == 1 {
            assert_ne!(max, "0");
        }
    }
}

#[test]
fn lengths_and_words() {
    let (code, v) = json(&["length", "--tree", &fixture("t1"), "--word", "a*b*a^-1*b^-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["lengths"][0]["length"], serde_json::json!({"1": "2"}));
    let (code, _) = json(&["length", "--tree", &fixture("t1"), "--word", "q"]);
    assert_eq!(code, 2);
}

#[test]
fn violations_exit_one() {
    let (code, v) = json(&["validate", "--tree", &fixture("tripod-violation")]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["very_small"]["failed"], "no_fixed_tripods");
}

#[test]
fn property_commands_pass_on_fixtures() {
    for name in ["t1", "x2-middle", "theta", "dumbbell", "boundary-2-1", "boundary-3-1"] {
        for cmd in ["index", "qrank", "prop41", "validate"] {
            let (code, v) = json(&[cmd, "--tree", &fixture(name)]);
            assert_eq!(code, 0, "{cmd} {name}: {v}");
        }
    }
    let (code, v) = json(&["resolve", "--tree", &fixture("x2-middle"), "--depth", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["cross_check"]["is_tree"], true);
    let (code, v) = json(&["boundary", "--n", "2", "--factors", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 0);
}

#[test]
fn errors_exit_two() {
    let (code, _, err) = rospace(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("frobnicate"));
    let (code, _, _) = rospace(&["index", "--tree", "/nonexistent.json"]);
    assert_eq!(code, 2);
    let dir = std::env::temp_dir().join(format!("rospace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"system": {"n": 2, "factors": [["a"]], "free": ["b"]}, "vertex_labels": 3}"#,
    )
    .unwrap();
    let (code, _, err) = rospace(&["index", "--tree", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("schema error at $"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        vec!["enumerate", "--n", "3", "--factors", "1", "--json"],
        vec!["resolve", "--tree", &fixture("t1"), "--json"],
        vec!["boundary", "--n", "3", "--factors", "1", "--json"],
    ] {
        assert_eq!(rospace(&args), rospace(&args));
    }
}
