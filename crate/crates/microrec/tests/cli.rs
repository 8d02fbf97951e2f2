//! End-to-end checks of the command line: output formats and exit codes
//! (0 success, 1 usage, 2 data error).

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn microrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_microrec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_lines(output: &Output) -> Vec<String> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .map(str::to_owned)
        .collect()
}

#[test]
fn mine_prints_class_table() {
    let data = fixture("smallnet");
    let output = microrec(&["mine", "--data", data.to_str().unwrap(), "--supp", "0.1"]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "0\t101,102\t0.125000");
}

#[test]
fn classify_prints_user_class_activeness() {
    let data = fixture("smallnet");
    let output = microrec(&["classify", "--data", data.to_str().unwrap()]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 200);
    let first: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(first[0], "1");
    assert_eq!(first[1], "active");
}

#[test]
fn profile_prints_class_weights() {
    let data = fixture("smallnet");
    let config = fixture("smallnet").join("config.txt");
    let output = microrec(&[
        "profile",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--user",
        "61",
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("1\t0.99"), "got {:?}", lines[0]);
}

#[test]
fn recommend_single_user_respects_k() {
    let data = fixture("smallnet");
    let config = fixture("smallnet").join("config.txt");
    let output = microrec(&[
        "recommend",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--user",
        "61",
        "--k",
        "2",
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 2);
    // user-id, item-id, rank, grade
    let fields: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(fields.len(), 4);
    assert_eq!(fields[0], "61");
    assert_eq!(fields[2], "1");
}

#[test]
fn train_emits_per_class_params() {
    let data = fixture("smallnet");
    let config = fixture("smallnet").join("config.txt");
    let output = microrec(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--beta",
        "0.9",
        "--performance",
        "0.01",
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("active\t"));
    assert!(lines[1].starts_with("inactive\t"));
    for line in lines {
        assert_eq!(line.split('\t').count(), 5);
    }
}

#[test]
fn pipeline_writes_artifacts_and_summary() {
    let data = fixture("smallnet");
    let config = fixture("smallnet").join("config.txt");
    let out = TempDir::new().unwrap();
    let output = microrec(&[
        "pipeline",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("MAP@k"));
    for name in [
        "keyword_classes.tsv",
        "taxonomy.tsv",
        "params.tsv",
        "recommendations.tsv",
        "evaluation.tsv",
    ] {
        assert!(out.path().join(name).exists(), "missing {name}");
    }
}

#[test]
fn evaluate_prints_report_rows() {
    let data = fixture("smallnet");
    let config = fixture("smallnet").join("config.txt");
    let output = microrec(&[
        "evaluate",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert!(lines.iter().any(|l| l.starts_with("user\t")));
    assert!(lines.iter().any(|l| l.starts_with("class\tactive\t")));
    assert!(lines.iter().any(|l| l.starts_with("overall\t")));
}

#[test]
fn usage_errors_exit_1() {
    // Unknown flag.
    let output = microrec(&["mine", "--bogus"]);
    assert_eq!(output.status.code(), Some(1));
    // Missing --data.
    let output = microrec(&["classify"]);
    assert_eq!(output.status.code(), Some(1));
    // recommend without a target.
    let data = fixture("smallnet");
    let output = microrec(&["recommend", "--data", data.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    // Bad config file.
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("config.txt"), "bogus = 1\n").unwrap();
    let output = microrec(&[
        "classify",
        "--data",
        data.to_str().unwrap(),
        "--config",
        dir.path().join("config.txt").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn data_errors_exit_2() {
    // Missing data directory.
    let output = microrec(&["classify", "--data", "/no/such/dir"]);
    assert_eq!(output.status.code(), Some(2));

    // Malformed line in strict mode.
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("user_profile.tsv"), "not a row\n").unwrap();
    for name in [
        "user_key_word.tsv",
        "item.tsv",
        "user_sns.tsv",
        "user_action.tsv",
        "rec_log.tsv",
    ] {
        std::fs::write(dir.path().join(name), "").unwrap();
    }
    let output = microrec(&["classify", "--data", dir.path().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    // The same corpus loads with --lenient.
    let output = microrec(&[
        "classify",
        "--data",
        dir.path().to_str().unwrap(),
        "--lenient",
    ]);
    assert_eq!(output.status.code(), Some(0));

    // Unknown user is a data error.
    let data = fixture("smallnet");
    let output = microrec(&[
        "profile",
        "--data",
        data.to_str().unwrap(),
        "--user",
        "999999",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    let output = microrec(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("pipeline"));
    let output = microrec(&["--version"]);
    assert_eq!(output.status.code(), Some(0));
}
