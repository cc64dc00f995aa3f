//! End-to-end checks of the coxrand binary: output shapes for every
//! subcommand, the documented exit codes, and thread-count neutrality.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn coxrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxrand"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn write_schedule(dir: &TempDir, name: &str, entries: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, format!("{{\"entries\": [{entries}]}}")).unwrap();
    path
}

const PAIR_SCHEDULE: &str = r#"{"label": 2, "c": 0.5, "alpha": 0.0, "beta": 0.0},
    {"label": 3, "c": 0.3, "alpha": 0.0, "beta": 0.0}"#;

#[test]
fn catalog_lists_only_canonical_types() {
    let out = coxrand(&["catalog"]);
    let text = stdout_of(&out);
    let entries: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert!(entries.len() > 60, "got {} catalog entries", entries.len());

    let names: Vec<&str> =
        entries.iter().map(|e| e["type"].as_str().unwrap()).collect();
    for expected in ["A1", "I2(4)", "H3", "E8", "A~2"] {
        assert!(names.contains(&expected), "missing {expected}");
    }
    for alias in ["B2", "I2(3)"] {
        assert!(!names.contains(&alias), "non-canonical {alias} listed");
    }
    for entry in &entries {
        assert!(entry["vertices"].as_u64().unwrap() >= 1);
        assert!(entry["edges"].is_array());
    }
}

#[test]
fn catalog_dot_names_every_type() {
    let out = coxrand(&["catalog", "--format", "dot", "--max-rank", "4"]);
    let text = stdout_of(&out);
    assert!(text.contains("// A1\n"));
    assert!(text.contains("// F~4\n"));
    assert!(text.matches("graph diagram {").count() > 20);
}

#[test]
fn sample_then_analyze_round_trips() {
    let dir = TempDir::new().unwrap();
    let schedule = write_schedule(&dir, "sched.json", PAIR_SCHEDULE);
    let graph_path = dir.path().join("g.json");

    let out = coxrand(&[
        "sample",
        "--config",
        schedule.to_str().unwrap(),
        "--n",
        "9",
        "--seed",
        "5",
        "--out",
        graph_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = coxrand(&["analyze", "--config", graph_path.to_str().unwrap(), "--betti"]);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["n"], 9);
    for key in ["fc_type", "hyperbolic", "witness", "nerve_dim", "zk", "betti"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert!(report["betti"][0].as_u64().unwrap() >= 1);
}

#[test]
fn analyze_accepts_a_sampling_spec() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        format!("{{\"n\": 8, \"schedule\": {{\"entries\": [{PAIR_SCHEDULE}]}}}}"),
    )
    .unwrap();

    let out = coxrand(&["analyze", "--config", spec.to_str().unwrap(), "--seed", "3"]);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["n"], 8);
    assert!(report.get("betti").is_none());
}

#[test]
fn sample_dot_marks_labels_and_infinite_pairs() {
    let dir = TempDir::new().unwrap();
    let schedule = write_schedule(
        &dir,
        "sched.json",
        r#"{"label": 3, "c": 0.4, "alpha": 0.0, "beta": 0.0}"#,
    );
    let out = coxrand(&[
        "sample",
        "--config",
        schedule.to_str().unwrap(),
        "--n",
        "6",
        "--seed",
        "1",
        "--format",
        "dot",
    ]);
    let text = stdout_of(&out);
    assert!(text.starts_with("graph diagram {"));
    assert!(text.contains("[label=\"3\"]"));
    assert!(text.contains("[style=dashed]"));
}

#[test]
fn sampling_is_reproducible_across_runs() {
    let dir = TempDir::new().unwrap();
    let schedule = write_schedule(&dir, "sched.json", PAIR_SCHEDULE);
    let args = ["sample", "--config", schedule.to_str().unwrap(), "--n", "30", "--seed", "77"];
    let first = coxrand(&args);
    let second = coxrand(&args);
    assert_eq!(stdout_of(&first), stdout_of(&second));
}

#[test]
fn expect_emits_one_csv_row_per_point() {
    let dir = TempDir::new().unwrap();
    let schedule = write_schedule(&dir, "sched.json", PAIR_SCHEDULE);
    let out = coxrand(&[
        "expect",
        "--pattern",
        "triangle-333",
        "--config",
        schedule.to_str().unwrap(),
        "--n",
        "10",
        "--n-range",
        "20:40:10",
        "--second-moment",
    ]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,expectation,leading_term,second_moment_ratio"));

    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let ns: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(ns, ["10", "20", "30", "40"]);
    for row in &rows {
        assert_eq!(row.len(), 4);
        assert!(row[1].parse::<f64>().unwrap() > 0.0);
        assert!(row[2].parse::<f64>().unwrap() > 0.0);
        assert!(row[3].parse::<f64>().unwrap() >= 1.0);
    }
}

#[test]
fn expect_accepts_inline_pattern_json() {
    let dir = TempDir::new().unwrap();
    let schedule = write_schedule(&dir, "sched.json", PAIR_SCHEDULE);
    let out = coxrand(&[
        "expect",
        "--pattern",
        r#"{"k": 2, "pairs": [[0, 1, 3]]}"#,
        "--config",
        schedule.to_str().unwrap(),
        "--n",
        "10",
    ]);
    let text = stdout_of(&out);
    let row = text.lines().nth(1).unwrap();
    let expectation: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((expectation - 45.0 * 0.3).abs() < 1e-9);
}

fn sweep_config(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("sweep.json");
    fs::write(
        &path,
        format!(
            r#"{{
  "schedule": {{"entries": [{PAIR_SCHEDULE}]}},
  "n_values": [6, 8],
  "trials": 20,
  "seed": 1,
  "properties": [{{"kind": "fc_type"}}, {{"kind": "hyperbolic"}}]
}}"#
        ),
    )
    .unwrap();
    path
}

#[test]
fn sweep_emits_a_csv_cell_per_n_and_property() {
    let dir = TempDir::new().unwrap();
    let config = sweep_config(&dir);
    let out = coxrand(&["sweep", "--config", config.to_str().unwrap()]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,property,estimate,ci_lo,ci_hi,trials,excluded"));

    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let estimate: f64 = row[2].parse().unwrap();
        let lo: f64 = row[3].parse().unwrap();
        let hi: f64 = row[4].parse().unwrap();
        assert!(lo <= estimate && estimate <= hi);
        assert_eq!(row[5], "20");
    }
}

#[test]
fn sweep_svg_output_is_wellformed() {
    let dir = TempDir::new().unwrap();
    let config = sweep_config(&dir);
    let out = coxrand(&["sweep", "--config", config.to_str().unwrap(), "--format", "svg"]);
    let text = stdout_of(&out);
    assert!(text.starts_with("<svg"));
    assert!(text.contains("<polyline"));
    assert!(text.trim_end().ends_with("</svg>"));
}

#[test]
fn sweep_threads_do_not_change_bytes() {
    let dir = TempDir::new().unwrap();
    let config = sweep_config(&dir);
    let run = |threads: &str| {
        stdout_of(&coxrand(&[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--threads",
            threads,
            "--format",
            "json",
        ]))
    };
    assert_eq!(run("1"), run("8"));
}

#[test]
fn threads_env_var_is_honored() {
    let dir = TempDir::new().unwrap();
    let config = sweep_config(&dir);
    let out = Command::new(env!("CARGO_BIN_EXE_coxrand"))
        .args(["sweep", "--config", config.to_str().unwrap()])
        .env("COXRAND_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let schedule = write_schedule(&dir, "sched.json", PAIR_SCHEDULE);

    let out = coxrand(&["sweep", "--preset", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));

    let out = coxrand(&[
        "expect",
        "--pattern",
        "triangle-333",
        "--config",
        schedule.to_str().unwrap(),
        "--n-range",
        "5to9",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = coxrand(&[
        "expect",
        "--pattern",
        "no-such-pattern",
        "--config",
        schedule.to_str().unwrap(),
        "--n",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"n": 18, "schedule": {"entries": [{"label": 2, "c": 0.9, "alpha": 0.0, "beta": 0.0}]}}"#,
    )
    .unwrap();
    let out = coxrand(&[
        "analyze",
        "--config",
        spec.to_str().unwrap(),
        "--budget-cliques",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_input_file_exits_4() {
    let out = coxrand(&["analyze", "--config", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(4));
}
