use std::process::{Command, Output};

const DIAMOND: &str = r#"{"elements":["a","b","c","d"],"relations":[["a","b"],["a","c"],["b","d"],["c","d"]]}"#;
const POINT: &str = r#"{"elements":["x"],"relations":[]}"#;
const CHAIN2: &str = r#"{"elements":["x","y"],"relations":[["x","y"]]}"#;

fn prelie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prelie"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn diamond_coproduct() {
    let o = prelie(&["coproduct", "--law", "nap", DIAMOND]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("1 · "), "{text}");
}

#[test]
fn coproduct_json_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diamond.json");
    std::fs::write(&path, DIAMOND).unwrap();
    let o = prelie(&["coproduct", "--law", "nap", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let terms: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(terms.as_array().unwrap().len(), 1);
}

#[test]
fn product_of_points() {
    let o = prelie(&["product", "--law", "prelie", POINT, POINT]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1 · "));
    let o = prelie(&["product", "--law", "nap", POINT, CHAIN2]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn pairing_counts_isomorphisms() {
    let o = prelie(&["pair", DIAMOND, DIAMOND]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = prelie(&["pair", POINT, CHAIN2]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn primitives_on_four_points() {
    let o = prelie(&["primitives", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("4 primitive(s) on 4 points"), "{text}");
    assert_eq!(text.matches("digraph hasse").count(), 4);
}

#[test]
fn enumerate_counts() {
    let o = prelie(&["enumerate", "--n", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classes"], 16);
    assert_eq!(v["connected"], 10);
    assert_eq!(v["labeled"], 219);
}

#[test]
fn verify_json_report() {
    let o = prelie(&["verify", "--law", "nap", "--max-total", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["law"], "nap");
    assert_eq!(v["instances"], 4);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_reports_are_stable_across_workers() {
    let one = prelie(&["verify", "--law", "compat", "--max-total", "5", "--json"]);
    let four = prelie(&["verify", "--law", "compat", "--max-total", "5", "--json", "--parallel", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn failing_law_exits_one() {
    let o = prelie(&["verify", "--law", "searrow-coassoc-lower-bound", "--max-total", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn freeness_check_passes() {
    let o = prelie(&["freeness-check", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["5", "22", "44", "44", "0", "22"]));
}

#[test]
fn export_dot_and_json() {
    let o = prelie(&["export", DIAMOND]);
    let dot = stdout(&o);
    assert!(dot.contains("digraph hasse"));
    assert_eq!(dot.matches(" -> ").count(), 4);
    let o = prelie(&["export", "--format", "json", DIAMOND]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["class_key"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["product", "--law", "prelie", "{bad", POINT],
        vec!["coproduct", "--law", "nap", r#"{"elements":["a"],"relations":[["a","z"]]}"#],
        vec!["coproduct", "--law", "nap", r#"{"elements":["a","b"],"relations":[["a","b"],["b","a"]]}"#],
        vec!["verify", "--law", "no-such-law", "--max-total", "3"],
        vec!["verify", "--law", "j-index", "--max-total", "3", "--topologies"],
        vec!["coproduct", "--law", "nap", "/nonexistent/file.json"],
    ] {
        let o = prelie(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "), "{args:?}");
    }
}
