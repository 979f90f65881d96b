//! End-to-end tests of the `qsteer` binary: exit codes, emitted files,
//! determinism, and round-tripping of schedule.json.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qsteer::scheduler::Schedule;
use qsteer::simulator::propagate_exact;
use qsteer::states::{fidelity, GeometricState, PureState};

use std::f64::consts::{FRAC_PI_2, PI};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qsteer")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qsteer-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn worked_example_config() -> serde_json::Value {
    serde_json::json!({
        "dim": 2,
        "initial": { "theta": [0.0], "phi": [0.0] },
        "target": { "theta": [FRAC_PI_2], "phi": [FRAC_PI_2] },
        "family": "ls",
        "lambda": 2.0,
        "bound": 1.0
    })
}

fn write_config(dir: &Path, value: &serde_json::Value) -> PathBuf {
    let path = dir.join("job.json");
    fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn synthesize_worked_example() {
    let dir = scratch_dir("synth");
    let cfg = write_config(&dir, &worked_example_config());
    let out = run(&["synthesize", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["pulse_count"], 2);
    assert!((summary["t_f"].as_f64().unwrap() - PI * PI / 4.0).abs() < 1e-12);
    assert!((summary["j_te"].as_f64().unwrap() - 5.0 * PI * PI / 16.0).abs() < 1e-12);

    assert!(dir.join("schedule.json").is_file());
    assert!(dir.join("controls.csv").is_file());
    let csv = fs::read_to_string(dir.join("controls.csv")).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("t,"));
}

#[test]
fn synthesize_is_deterministic() {
    let dir_a = scratch_dir("det-a");
    let dir_b = scratch_dir("det-b");
    let cfg = write_config(&dir_a, &worked_example_config());
    for dir in [&dir_a, &dir_b] {
        let out = run(&["synthesize", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let a = fs::read(dir_a.join("schedule.json")).unwrap();
    let b = fs::read(dir_b.join("schedule.json")).unwrap();
    assert_eq!(a, b, "schedule.json must be byte-identical across runs");
}

#[test]
fn schedule_json_round_trips_through_the_library() {
    let dir = scratch_dir("roundtrip");
    let cfg = write_config(&dir, &worked_example_config());
    assert!(run(&["synthesize", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .status
        .success());
    let schedule: Schedule =
        serde_json::from_str(&fs::read_to_string(dir.join("schedule.json")).unwrap()).unwrap();
    let target = GeometricState::new(vec![FRAC_PI_2], vec![FRAC_PI_2])
        .unwrap()
        .to_amplitudes();
    let fin = propagate_exact(&schedule, &PureState::basis(2, 0)).unwrap();
    assert!(fidelity(&fin, &target).unwrap() >= 1.0 - 1e-12);
}

#[test]
fn verify_worked_example_passes() {
    let dir = scratch_dir("verify");
    let cfg = write_config(&dir, &worked_example_config());
    let out = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert!(report["exact_fidelity"].as_f64().unwrap() >= 1.0 - 1e-8);
    assert!(report["numeric_fidelity"].as_f64().unwrap() >= 1.0 - 1e-8);
    assert!(report["pass"].as_bool().unwrap());
    assert!((report["measured_jte"].as_f64().unwrap() - 5.0 * PI * PI / 16.0).abs() < 1e-8);

    let traj = fs::read_to_string(dir.join("trajectory.csv")).unwrap();
    let header = traj.lines().next().unwrap();
    assert!(header.contains("bloch_x"), "qubit trajectory carries Bloch columns");
}

#[test]
fn verify_fails_with_exit_3_on_coarse_integration() {
    let dir = scratch_dir("verify-coarse");
    let mut cfg_value = worked_example_config();
    cfg_value["rk4_steps_per_pulse"] = serde_json::json!(1);
    let cfg = write_config(&dir, &cfg_value);
    let out = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn table_worked_example() {
    let dir = scratch_dir("table");
    let cfg = write_config(&dir, &worked_example_config());
    let out = run(&["table", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());

    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(dir.join("table1.json")).unwrap()).unwrap();
    let ls = rows.iter().find(|r| r["family"] == "ls").unwrap();
    assert!((ls["j_te"].as_f64().unwrap() - 5.0 * PI * PI / 16.0).abs() < 1e-10);
    assert!((ls["j_t"].as_f64().unwrap() - PI * PI / 4.0).abs() < 1e-10);

    // LN rows approach the BB row from above as the order grows
    let bb = rows.iter().find(|r| r["family"] == "bb").unwrap()["j_te"].as_f64().unwrap();
    let mut prev = f64::INFINITY;
    for row in rows.iter().filter(|r| r["family"] == "ln") {
        let v = row["j_te"].as_f64().unwrap();
        assert!(v > bb && v < prev);
        prev = v;
    }
    assert!(!fs::read_to_string(dir.join("table1.txt")).unwrap().is_empty());
}

#[test]
fn negative_lambda_exits_2_naming_the_field() {
    let dir = scratch_dir("bad-lambda");
    let mut cfg_value = worked_example_config();
    cfg_value["lambda"] = serde_json::json!(-2.0);
    let cfg = write_config(&dir, &cfg_value);
    let out = run(&["synthesize", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
}

#[test]
fn identity_transition_yields_empty_schedule() {
    let dir = scratch_dir("identity");
    let mut cfg_value = worked_example_config();
    cfg_value["target"] = cfg_value["initial"].clone();
    let cfg = write_config(&dir, &cfg_value);
    let out = run(&["synthesize", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["pulse_count"], 0);
    assert_eq!(summary["t_f"].as_f64().unwrap(), 0.0);
}

#[test]
fn selftest_is_green() {
    let out = run(&["selftest", "--seed", "7", "--trials", "10"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["failures"], 0);
    assert_eq!(report["trials"], 10);
}
