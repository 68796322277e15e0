//! End-to-end tests that drive the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lomax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lomax"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn wind_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/wind_catastrophes.csv")
}

fn write(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).expect("write fixture");
    path
}

#[test]
fn help_and_version_exit_zero() {
    let help = lomax(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("Usage"));
    assert!(stdout(&help).contains("fit"));
    let version = lomax(&["--version"]);
    assert_eq!(code(&version), 0);
}

#[test]
fn unknown_flag_exits_one() {
    let out = lomax(&["--bogus"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--bogus"));
}

#[test]
fn unknown_method_exits_one() {
    let out = lomax(&["fit", wind_path().to_str().unwrap(), "--method", "BOGUS"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown method"));
}

#[test]
fn missing_file_exits_two() {
    let out = lomax(&["fit", "/nonexistent/sample.txt"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("data error"));
}

#[test]
fn failed_single_fit_exits_three_but_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "tiny.txt", "1\n2\n3\n");
    let out = lomax(&["fit", file.to_str().unwrap(), "--method", "LME"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("no"));
    let all = lomax(&["fit", file.to_str().unwrap()]);
    assert_eq!(code(&all), 0, "method=all reports failures in rows");
}

#[test]
fn fit_reproduces_the_bundled_case_study() {
    let out = lomax(&[
        "fit",
        wind_path().to_str().unwrap(),
        "--method",
        "MLE",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &rows.as_array().unwrap()[0];
    assert_eq!(row["method"], "MLE");
    assert_eq!(row["converged"], true);
    let sigma = row["params"]["sigma"].as_f64().unwrap();
    let beta = row["params"]["beta"].as_f64().unwrap();
    assert!((sigma - 53.099).abs() < 0.01, "sigma = {sigma}");
    assert!((beta - 6.726).abs() < 0.01, "beta = {beta}");
}

#[test]
fn fit_csv_lists_every_method() {
    let out = lomax(&["fit", wind_path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,sigma,beta,converged,objective_value,iterations,reason"
    );
    let methods: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        methods,
        [
            "MME", "LME", "PWME", "MLE", "MLE.b", "MDE.CvM", "MDE.SD", "MDE.KL", "MDE.chi2",
            "MDE.TV"
        ]
    );
}

#[test]
fn sample_is_deterministic_and_positive() {
    let args = ["sample", "--sigma", "50", "--beta", "6", "--n", "25", "--seed", "7"];
    let first = lomax(&args);
    let second = lomax(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let values: Vec<f64> = stdout(&first)
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 25);
    assert!(values.iter().all(|v| *v > 0.0));
}

#[test]
fn sample_rejects_bad_parameters() {
    let out = lomax(&["sample", "--sigma", "-1", "--beta", "6", "--n", "5"]);
    assert_eq!(code(&out), 1);
    let out = lomax(&["sample", "--sigma", "1", "--beta", "6", "--n", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn degroup_spreads_ties_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "ties.txt", "1\n1\n1\n5\n");
    let out = lomax(&["degroup", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0.75\n1\n1.25\n5\n");

    let csv = lomax(&["degroup", file.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(stdout(&csv), "value\n0.75\n1\n1.25\n5\n");

    let json = lomax(&["degroup", file.to_str().unwrap(), "--format", "json"]);
    let values: Vec<f64> = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(values, vec![0.75, 1.0, 1.25, 5.0]);
}

#[test]
fn column_and_shift_match_preprocessed_input() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(
        &dir,
        "losses.csv",
        "event,loss\na,2.0\nb,3.5\nc,4.0\nd,6.0\ne,8.0\nf,11.0\ng,2.5\nh,3.0\n",
    );
    let plain = write(
        &dir,
        "shifted.txt",
        "1.5\n3\n3.5\n5.5\n7.5\n10.5\n2\n2.5\n",
    );
    let from_csv = lomax(&[
        "fit",
        csv.to_str().unwrap(),
        "--column",
        "loss",
        "--shift",
        "0.5",
        "--format",
        "csv",
    ]);
    let from_plain = lomax(&["fit", plain.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(from_csv.stdout, from_plain.stdout);

    let bad_column = lomax(&["fit", csv.to_str().unwrap(), "--column", "nope"]);
    assert_eq!(code(&bad_column), 2);
}

#[test]
fn gof_reports_a_p_value() {
    let out = lomax(&[
        "gof",
        wind_path().to_str().unwrap(),
        "--method",
        "MLE",
        "--shift",
        "1.5",
        "--reps",
        "100",
        "--seed",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let g: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(g["method"], "MLE");
    assert_eq!(g["bootstrap_reps"], 100);
    let p = g["p_value"].as_f64().unwrap();
    assert!(p > 0.0 && p <= 1.0, "p = {p}");
    let kept = g["kept"].as_u64().unwrap();
    let failed = g["refits_failed"].as_u64().unwrap();
    assert_eq!(kept + failed, 100);
}

#[test]
fn grid_runs_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = write(
        &dir,
        "grid.conf",
        "# two cells\nn=25 sigma=1 beta=2 reps=20 methods=MLE,LME\nn=40 sigma=2 beta=1.5 reps=20 seed=5 methods=MLE\n",
    );
    let out = lomax(&["grid", "--config", conf.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "header plus three method rows");
    assert!(lines[0].starts_with("n,sigma,beta,method,"));
    assert!(lines[1].starts_with("25,1,2,MLE,"));
    assert!(lines[2].starts_with("25,1,2,LME,"));
    assert!(lines[3].starts_with("40,2,1.5,MLE,"));
}

#[test]
fn grid_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.conf", "n=25 sigma=1 beta=2 reps=ten\n");
    let out = lomax(&["grid", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("config line 1"));

    let empty = write(&dir, "empty.conf", "# nothing\n");
    let out = lomax(&["grid", "--config", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn out_writes_the_file_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("fits.csv");
    let out = lomax(&[
        "fit",
        wind_path().to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written.lines().count(), 11);
}

#[test]
fn thread_count_does_not_change_results() {
    let base = [
        "simulate", "--sigma", "1", "--beta", "2.5", "--n", "30", "--reps", "40", "--seed", "3",
        "--methods", "MLE,LME", "--format", "csv",
    ];
    let one = lomax(&[&base[..], &["--threads", "1"]].concat());
    let two = lomax(&[&base[..], &["--threads", "2"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
}
