use std::process::{Command, Output};

fn periodica(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_periodica"))
        .args(args)
        .env("PERIODICA_JOBS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn forbid_prints_reduced_system() {
    for (word, expected) in [("aab", "bb\naaa\nbab\n"), ("a", "b\n"), ("ab", "aa\nbb\n")] {
        let out = periodica(&["forbid", word]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), expected);
    }
    let out = periodica(&["forbid", "aab", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["restrictions"], serde_json::json!(["bb", "aaa", "bab"]));
    assert_eq!(periodica(&["forbid", "a1"]).status.code(), Some(2));
}

#[test]
fn verify_reports_rows() {
    let out = periodica(&["verify", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(3).unwrap().starts_with("2,3,2,3,3,"));

    let out = periodica(&["verify", "5", "--json"]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> =
        stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4]["n"], 5);
    assert_eq!(rows[4]["min_c"], 4);

    assert_eq!(periodica(&["verify", "0"]).status.code(), Some(2));
}

#[test]
fn verify_ternary_survey() {
    let out = periodica(&["verify", "3", "--alphabet", "3", "--json"]);
    assert!(out.status.success());
    let first: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(first["min_c"], 2);
}

#[test]
fn graph_dot() {
    let edges = |text: &str| text.lines().filter(|l| l.contains("->")).count();
    let nodes = |text: &str| text.lines().filter(|l| l.contains("[label") && !l.contains("->")).count();
    let one = stdout(&periodica(&["graph", "aab", "1", "--dot"]));
    assert_eq!((nodes(&one), edges(&one)), (2, 3));
    let three = stdout(&periodica(&["graph", "aab", "3", "--dot"]));
    assert_eq!((nodes(&three), edges(&three)), (3, 3));
    let single = stdout(&periodica(&["graph", "a", "0", "--dot"]));
    assert_eq!((nodes(&single), edges(&single)), (1, 1));
}

#[test]
fn tables_first_values() {
    let t2 = stdout(&periodica(&["tables", "--which", "2"]));
    let row2: Vec<&str> = t2.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(row2[0], "1.236068");
    let t1 = stdout(&periodica(&["tables", "--which", "1"]));
    assert!(t1.trim_start().starts_with("(1.05902, 2, 2)"));
    let t3 = stdout(&periodica(&["tables", "--which", "3", "--csv"]));
    let first = t3.lines().nth(1).unwrap();
    let value: f64 = first.split(',').nth(2).unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-6);
    assert_eq!(periodica(&["tables", "--which", "4"]).status.code(), Some(2));
}

#[test]
fn drive_summaries_agree() {
    let summary = |args: &[&str]| {
        let out = periodica(args);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["summary"].clone()
    };
    let expected = serde_json::json!({"n": 3, "crossroads": 2, "restrictions": 3});
    assert_eq!(summary(&["drive", "aab", "--mode", "parallel"]), expected);
    assert_eq!(summary(&["drive", "aab", "--mode", "sequential", "--seed", "7"]), expected);
    assert_eq!(periodica(&["drive", "a"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = stdout(&periodica(&["verify", "8", "--jobs", "1"]));
    let b = stdout(&periodica(&["verify", "8", "--jobs", "3"]));
    assert_eq!(a, b);
    let x = stdout(&periodica(&["drive", "aababb", "--mode", "sequential", "--seed", "3"]));
    let y = stdout(&periodica(&["drive", "aababb", "--mode", "sequential", "--seed", "3"]));
    assert_eq!(x, y);
}
