//! End-to-end checks of the `fracqueue` binary.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use fracqueue::transient::{classical_distribution, classical_p};
use fracqueue::{QueueParams, SeriesControl, TransientQuery};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracqueue"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const RATES: [&str; 6] = ["--lambda", "5", "--mu", "3", "--xi", "1"];

#[test]
fn probability_at_time_zero_is_a_point_mass() {
    let o = run(&[&["probability"][..], &RATES, &["--alpha", "0.7", "--from-state", "2", "--state", "0,1,2,3", "--time", "0"]].concat());
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    let probs: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(probs, vec![0.0, 0.0, 1.0, 0.0]);
}

#[test]
fn unit_order_probability_equals_classical() {
    let o = run(&[&["probability"][..], &RATES, &["--alpha", "1", "--from-state", "1", "--state", "0,4", "--grid", "0.5:2:3"]].concat());
    assert!(o.status.success());
    let p = QueueParams::new(5.0, 3.0, 1.0, 1.0).unwrap();
    for r in csv_rows(&stdout(&o)) {
        let (t, n, v): (f64, usize, f64) = (r[0].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        let row = classical_distribution(&p, 1, t, 4, SeriesControl::default()).unwrap();
        assert_eq!(v, row[n], "t={t} n={n}");
        let single = classical_p(&p, TransientQuery::new(1, n, t).unwrap(), SeriesControl::default()).unwrap();
        assert!((v - single).abs() < 1e-14);
    }
}

#[test]
fn moments_start_at_initial_state() {
    let o = run(&[&["moments"][..], &RATES, &["--alpha", "0.8", "--from-state", "3", "--grid", "0:1:2", "--format", "json"]].concat());
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["mean"], 3.0);
    assert_eq!(rows[0]["variance"], 0.0);
}

#[test]
fn simulation_is_reproducible_and_round_trips_through_estimation() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&[&["simulate"][..], &RATES, &["--alpha", "0.9", "--events", "5000", "--seed", "11", "--out", out.to_str().unwrap()]].concat());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("time,kind,state\n"));
    assert_eq!(text.lines().count(), 5000 + 3);

    let o = run(&["estimate", "--input", a.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let alpha = r["alpha_hat"].as_f64().unwrap();
    let theta = r["theta_hat"].as_f64().unwrap();
    assert!((alpha - 0.9).abs() < 0.1, "{alpha}");
    assert!((theta - 9.0).abs() < 2.0, "{theta}");
}

#[test]
fn estimation_inverts_exact_log_moments() {
    // two sojourns from state 1 whose logs have mean and variance of the (0.7, 7) law
    let (alpha, theta) = (0.7_f64, 7.0_f64);
    let m = -theta.ln() / alpha - 0.577_215_664_901_532_9;
    let s = (PI * PI * (1.0 / (3.0 * alpha * alpha) - 1.0 / 6.0)).sqrt();
    let (w1, w2) = ((m - s).exp(), (m + s).exp());
    let log = format!("time,kind,state\n0,start,1\n{w1:e},arrival,2\n{:e},service,1\n", w1 + w2);
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("fixture.csv");
    std::fs::write(&input, log).unwrap();
    let o = run(&["estimate", "--input", input.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((r["alpha_hat"].as_f64().unwrap() - alpha).abs() < 1e-9);
    assert!((r["theta_hat"].as_f64().unwrap() - theta).abs() < 1e-8);
    assert_eq!(r["lambda_hat"], r["mu_hat"]);
}

fn assert_usage_error(o: &Output, needle: &str) {
    assert_eq!(o.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(needle), "`{needle}` not in: {err}");
}

#[test]
fn domain_errors_exit_with_code_two() {
    assert_usage_error(&run(&["probability", "--lambda=-1", "--mu", "3", "--xi", "1", "--alpha", "1", "--state", "0", "--time", "1"]), "--lambda");
    assert_usage_error(&run(&[&["probability"][..], &RATES, &["--alpha", "1.5", "--state", "0", "--time", "1"]].concat()), "alpha");
    assert_usage_error(&run(&[&["simulate"][..], &RATES, &["--alpha", "0.5", "--events", "0"]].concat()), "--events");
    assert_usage_error(&run(&[&["probability"][..], &RATES, &["--alpha", "1", "--state", "0", "--grid", "2:1:4"]].concat()), "grid");
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_usage_error(&run(&["estimate", "--input", empty.to_str().unwrap()]), "header");
    assert_usage_error(&run(&["estimate", "--input", "/nonexistent/log.csv"]), "cannot open");
    let only_empty = dir.path().join("only_empty.csv");
    std::fs::write(&only_empty, "time,kind,state\n0,start,0\n1,empty_restart,1\n").unwrap();
    assert_usage_error(&run(&["estimate", "--input", only_empty.to_str().unwrap()]), "no sojourn");
}

fn study_file(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("study.json");
    std::fs::write(
        &path,
        r#"{
  "base_seed": 9,
  "replicates": 30,
  "confidence_level": 0.95,
  "blocks": [
    { "id": "a", "params_true": { "lambda": 4.0, "mu": 2.0, "xi": 1.0, "alpha": 0.9 }, "sample_sizes": [200, 400] },
    { "id": "b", "params_true": { "lambda": 2.0, "mu": 2.0, "xi": 2.0, "alpha": 1.0 }, "sample_sizes": [200] }
  ]
}"#,
    )
    .unwrap();
    path
}

#[test]
fn study_output_does_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = study_file(dir.path());
    let go = |jobs: &str| run(&["mc-study", "--config", cfg.to_str().unwrap(), "--jobs", jobs]);
    let (a, b) = (go("1"), go("3"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("config_id,param,true,pct_bias,cv,cp,n,replicates\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 4);
}

#[test]
fn study_block_selection_and_single_replicate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = study_file(dir.path());
    let o = run(&["mc-study", "--config", cfg.to_str().unwrap(), "--block", "b", "--replicates", "1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cells = v.as_array().unwrap();
    assert_eq!(cells.len(), 1);
    for row in cells[0]["rows"].as_array().unwrap() {
        assert_eq!(row["degenerate"], true);
        assert!(row["cv"].is_null());
    }
    assert_usage_error(&run(&["mc-study", "--config", cfg.to_str().unwrap(), "--block", "zzz"]), "zzz");
}

#[test]
fn traces_cover_each_order() {
    let o = run(&[&["traces"][..], &RATES, &["--alpha", "1,0.9,0.8,0.7", "--until", "3", "--seed", "5"]].concat());
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    for a in ["1.0", "0.9", "0.8", "0.7"] {
        assert!(rows.iter().any(|r| r[0] == a && r[2] == "start"));
        assert!(rows.iter().any(|r| r[0] == a && r[2] == "end" && r[1] == "3.0"));
    }
}
