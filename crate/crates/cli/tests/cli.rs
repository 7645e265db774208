//! End-to-end tests of the `mzr` binary: command grammar, wire formats and
//! exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use mzr_core::reduce::{MzvCombination, PivotStrategy, Reducer};
use mzr_core::{classify, IndexPoint};

fn mzr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzr"))
        .args(args)
        .env_remove("MZR_CACHE")
        .output()
        .expect("failed to spawn mzr")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process was signalled")
}

#[test]
fn classify_regular_and_singular() {
    let out = mzr(&["classify", "--", "0", "-3"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), r#"{"status":"regular"}"#);

    let out = mzr(&["classify", "--", "-1", "-1"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"status":"singular","condition":"b","k":2}"#
    );

    let out = mzr(&["classify", "--", "1"]);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"status":"singular","condition":"a","k":1}"#
    );
}

#[test]
fn reduce_json_output() {
    let out = mzr(&["reduce", "--", "2", "-3"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"terms":[{"index":[],"coeff":"1/6"},{"index":[2],"coeff":"1/120"}]}"#
    );
}

#[test]
fn reduce_latex_output() {
    let out = mzr(&["reduce", "--format", "latex", "--", "-1", "-2"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), r"-\frac{1}{240}");
}

#[test]
fn reduce_plain_output_and_pivot() {
    let out = mzr(&["reduce", "--format", "plain", "--pivot", "leftmost", "--", "-2", "5"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        "1/3*zeta(2) - 1/2*zeta(3) + 1/6*zeta(4)"
    );

    let out = mzr(&["reduce", "--pivot", "j=1", "--", "-2", "5"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn reduce_singular_exits_one_with_verdict_on_stderr() {
    let out = mzr(&["reduce", "--", "-1", "-1"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains(r#"{"status":"singular","condition":"b","k":2}"#));
}

#[test]
fn parse_errors_exit_two() {
    // non-integer entries
    let out = mzr(&["reduce", "--", "x", "y"]);
    assert_eq!(exit_code(&out), 2);
    // missing entries
    let out = mzr(&["classify"]);
    assert_eq!(exit_code(&out), 2);
    // bad pivot / format / truncation
    let out = mzr(&["reduce", "--pivot", "sideways", "--", "2", "-3"]);
    assert_eq!(exit_code(&out), 2);
    let out = mzr(&["reduce", "--format", "xml", "--", "2", "-3"]);
    assert_eq!(exit_code(&out), 2);
    let out = mzr(&["eval", "--N", "99", "--", "2", "-3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn reduce_json_round_trips() {
    for entries in [vec![2, -3], vec![-2, 5], vec![-1, 2, 4], vec![3, 0]] {
        let args: Vec<String> = entries.iter().map(|n| n.to_string()).collect();
        let mut cli_args = vec!["reduce".to_string(), "--".to_string()];
        cli_args.extend(args);
        let arg_refs: Vec<&str> = cli_args.iter().map(|s| s.as_str()).collect();
        let out = mzr(&arg_refs);
        assert_eq!(exit_code(&out), 0);

        let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        let parsed = MzvCombination::from_json(&value).unwrap();
        let mut reducer = Reducer::new();
        let direct = reducer
            .reduce(&IndexPoint::new(entries), PivotStrategy::Rightmost)
            .unwrap();
        assert_eq!(parsed, direct);
    }
}

#[test]
fn reduce_trace_replays() {
    let out = mzr(&["reduce", "--trace", "--", "-1", "2", "4"]);
    assert_eq!(exit_code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let steps = value["trace"]["steps"].as_array().unwrap();
    assert_eq!(steps[0]["point"], serde_json::json!([-1, 2, 4]));
    assert_eq!(steps[0]["pivot"], serde_json::json!(1));
    let combination = MzvCombination::from_json(&value["combination"]).unwrap();
    assert!(!combination.is_zero());
}

#[test]
fn eval_reports_value_and_bound() {
    let out = mzr(&["eval", "--N", "200000", "--", "1", "2"]);
    assert_eq!(exit_code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let v = value["value"].as_f64().unwrap();
    let bound = value["error_bound"].as_f64().unwrap();
    assert!((v - 1.2020569).abs() < 1e-4, "zeta(1,2) far off: {v}");
    assert!(bound > 0.0 && bound < 1e-3);

    // singular point: exit 1
    let out = mzr(&["eval", "--", "-1", "-1"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn eval_cache_file_round_trip() {
    let path: PathBuf =
        std::env::temp_dir().join(format!("mzr-cli-cache-{}.json", std::process::id()));
    let path_str = path.to_str().unwrap();

    let out = mzr(&["eval", "--N", "100000", "--cache", path_str, "--", "2", "-3"]);
    assert_eq!(exit_code(&out), 0);
    let text = std::fs::read_to_string(&path).expect("cache file was not written");
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(json.get("2|100000").is_some(), "cache missing key: {text}");

    // second run consumes the cache; output must be identical
    let again = mzr(&["eval", "--N", "100000", "--cache", path_str, "--", "2", "-3"]);
    assert_eq!(stdout(&again), stdout(&out));

    // the MZR_CACHE environment variable is the default cache path
    let via_env = Command::new(env!("CARGO_BIN_EXE_mzr"))
        .args(["eval", "--N", "100000", "--", "2", "-3"])
        .env("MZR_CACHE", path_str)
        .output()
        .unwrap();
    assert_eq!(stdout(&via_env), stdout(&out));

    std::fs::remove_file(&path).ok();
}

#[test]
fn table_emits_exactly_the_regular_points() {
    let out = mzr(&["table", "--depth", "2", "--min", "-6", "--max", "8", "--N", "100000"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let mut emitted = Vec::new();
    for line in text.lines() {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(row["status"], "regular");
        let entries: Vec<i64> = row["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_i64().unwrap())
            .collect();
        assert!(classify(&IndexPoint::new(entries.clone())).is_regular());
        assert!(row["value"].is_f64());
        MzvCombination::from_json(&row["combination"]).unwrap();
        emitted.push(entries);
    }
    let mut expected = Vec::new();
    for n1 in -6..=8 {
        for n2 in -6..=8 {
            if classify(&IndexPoint::new(vec![n1, n2])).is_regular() {
                expected.push(vec![n1, n2]);
            }
        }
    }
    assert_eq!(emitted, expected);
}

#[test]
fn table_csv_has_header_and_rows() {
    let out = mzr(&[
        "table", "--depth", "2", "--min", "-2", "--max", "2", "--format", "csv", "--N", "100000",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n1,n2,status,value,error_bound,combination"
    );
    let rows: Vec<&str> = lines.collect();
    let expected = (-2..=2)
        .flat_map(|a| (-2..=2).map(move |b| (a, b)))
        .filter(|&(a, b)| classify(&IndexPoint::new(vec![a, b])).is_regular())
        .count();
    assert_eq!(rows.len(), expected);
    assert!(rows.iter().all(|r| r.contains(",regular,")));
}

#[test]
fn table_rejects_bad_ranges() {
    let out = mzr(&["table", "--depth", "0", "--min", "0", "--max", "1"]);
    assert_eq!(exit_code(&out), 2);
    let out = mzr(&["table", "--depth", "2", "--min", "3", "--max", "-3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn selftest_passes() {
    let out = mzr(&["selftest"]);
    let text = stdout(&out);
    assert_eq!(exit_code(&out), 0, "selftest failed:\n{text}");
    assert!(text.contains("total:"));
    assert!(!text.contains("FAILED"), "selftest reported failures:\n{text}");
}
