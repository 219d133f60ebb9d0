// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qdm_cphase::cli::RunManifest;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qdm-cphase"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn simulate_defaults_writes_series_report_and_manifests() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "run.json", "{}");
    let out = run(
        &[
            "simulate", "--config", "run.json", "--out", "s.csv", "--report", "r.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(!text.contains('\r'));
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "t_ps,omega1,omega2,pop_G_uu,pop_G_ud,pop_G_du,pop_G_dd,pop_T1_u,pop_T1_d,\
         pop_I1_u,pop_I1_d,pop_T2,pop_I2,trace_dev,purity"
    );
    let rows = csv_rows(&dir.path().join("s.csv"));
    assert_eq!(rows.len(), 1201);
    assert_eq!(&rows[0][3..13], &[0.25, 0.25, 0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    for r in &rows {
        assert!((r[3] - 0.25).abs() < 1e-9);
    }

    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let f = report["fidelity"].as_f64().unwrap();
    assert!(f > 0.0 && f <= 1.0);
    assert_eq!(report["phase_table"]["entries"][0]["overlap"][0].as_f64(), Some(1.0));

    for name in ["s.csv.manifest.json", "r.json.manifest.json"] {
        let m: RunManifest = serde_json::from_str(&fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        assert_eq!(m.command, "simulate");
        assert_eq!(m.config_echo, qdm_cphase::dynamics::SimConfig::default());
        assert_eq!(m.output_paths, vec!["s.csv", "r.json"]);
    }
}

#[test]
fn rerun_from_manifest_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.json",
        r#"{"t_start_ps": -12.5, "t_end_ps": 7.25, "tau_mev": 1.3, "gamma2_per_ns": 0.7, "sample_stride": 37}"#,
    );
    assert!(run(&["simulate", "--config", "run.json", "--out", "a.csv"], dir.path())
        .status
        .success());
    assert!(run(
        &["simulate", "--config", "a.csv.manifest.json", "--out", "b.csv"],
        dir.path()
    )
    .status
    .success());
    assert_eq!(
        fs::read(dir.path().join("a.csv")).unwrap(),
        fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn zero_coupling_config_keeps_every_population_constant() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.json",
        r#"{"tau_mev": 0, "gamma1_per_ns": 0, "gamma2_per_ns": 0,
            "pulse1": {"amplitude": 0}, "pulse2": {"amplitude": 0}, "t_end_ps": -50}"#,
    );
    let out = run(&["simulate", "--config", "run.json", "--out", "s.csv"], dir.path());
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("s.csv"));
    for r in &rows {
        assert_eq!(&r[3..13], &rows[0][3..13]);
    }
}

#[test]
fn integration_failure_leaves_marker_row_and_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    // the adaptive controller cannot meet this tolerance above its minimum step
    write(
        dir.path(),
        "run.json",
        r#"{"integrator": "rk45_adaptive", "adaptive_tol": 1e-300, "t_end_ps": -55}"#,
    );
    let out = run(&["simulate", "--config", "run.json", "--out", "s.csv"], dir.path());
    assert!(!out.status.success());
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("# integration failed at t_ps="), "{last}");
    assert!(text.lines().count() >= 2);
}

#[test]
fn invalid_config_is_rejected_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"gamma2_per_ns": -1}"#);
    let out = run(&["simulate", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma2"));

    write(dir.path(), "typo.json", r#"{"gama2_per_ns": 1}"#);
    let out = run(&["simulate", "--config", "typo.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gama2_per_ns"));
}

#[test]
fn unit_mode_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "run.json", r#"{"t_end_ps": -59}"#);
    let out = run(
        &[
            "simulate",
            "--config",
            "run.json",
            "--out",
            "s.csv",
            "--unit-mode",
            "hbar_unity",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let m: RunManifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m.tau_rad_per_ps, 2.0);
}

#[test]
fn gate_table_analytic_and_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gate-table", "--analytic"], dir.path());
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let signs: Vec<f64> = v["ideal"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["overlap"][0].as_f64().unwrap())
        .collect();
    assert_eq!(signs, [1.0, -1.0, 1.0, 1.0]);
    assert!(v["reports"].as_array().unwrap().is_empty());

    write(dir.path(), "closed.json", r#"{"gamma1_per_ns": 0, "gamma2_per_ns": 0}"#);
    let out = run(
        &["gate-table", "--config", "closed.json", "--out", "t.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["unit_mode"], "physical");
    assert_eq!(reports[1]["unit_mode"], "hbar_unity");
    for r in reports {
        let e = &r["phase_table"]["entries"];
        assert_eq!(e[0]["overlap"][0].as_f64(), Some(1.0));
        assert_eq!(e[0]["overlap"][1].as_f64(), Some(0.0));
    }
    // with ħ = 1 the |↑,↓⟩ entry comes back with a negative, purely real overlap
    let ud = &reports[1]["phase_table"]["entries"][1]["overlap"];
    let (re, im) = (ud[0].as_f64().unwrap(), ud[1].as_f64().unwrap());
    assert!(re < 0.0 && re.abs() > im.abs(), "{re} {im}");
    assert!(dir.path().join("t.json.manifest.json").exists());
}

#[test]
fn sweep_writes_ordered_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sweep.json",
        r#"{"base": {"t_start_ps": -20, "t_end_ps": 20},
            "parameter": "gamma2_per_ns", "values": [0, 0.25, 0.5, 1.0, 1.25]}"#,
    );
    let out = run(&["sweep", "--spec", "sweep.json", "--out", "s.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,fidelity,trace_dev_max,min_eig,error"));
    let values: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(values, [0.0, 0.25, 0.5, 1.0, 1.25]);

    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s.csv.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["failed"], 0);
    assert_eq!(summary["points"].as_array().unwrap().len(), 5);

    let out = run(
        &["sweep", "--spec", "s.csv.manifest.json", "--out", "again.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(text, fs::read_to_string(dir.path().join("again.csv")).unwrap());
}

#[test]
fn sweep_point_failure_is_recorded_and_exit_is_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sweep.json",
        r#"{"base": {"t_start_ps": -5, "t_end_ps": 5}, "parameter": "pulse2.amplitude", "values": [3.5, -1]}"#,
    );
    let out = run(&["sweep", "--spec", "sweep.json", "--out", "s.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].ends_with(','));
    assert!(rows[1].contains(",,,,") && rows[1].contains("pulse2.amplitude"));
}

#[test]
fn empty_sweep_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "sweep.json", r#"{"parameter": "gamma2", "values": []}"#);
    let out = run(&["sweep", "--spec", "sweep.json", "--out", "s.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("s.csv").exists());
}

#[test]
fn verify_canary_fails_three_level_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--corrupt-tau-sign", "--report", "v.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.lines().any(|l| l.starts_with("FAIL three_level_rabi")),
        "{stdout}"
    );
    assert!(stdout.lines().any(|l| l.starts_with("PASS dark_state")));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn verify_wide_step_degrades_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--dt", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("FAIL dt_convergence")), "{stdout}");
    assert!(stdout.lines().any(|l| l.starts_with("PASS three_level_rabi")));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name.ends_with("_sweep.json") {
            let spec = qdm_cphase::cli::load_sweep_spec(&path).unwrap();
            assert!(!spec.values.is_empty(), "{name}");
        } else {
            qdm_cphase::cli::load_config(&path).unwrap();
        }
        seen += 1;
    }
    assert!(seen >= 5);
    let default = qdm_cphase::cli::load_config(&dir.join("default.json")).unwrap();
    assert_eq!(default, qdm_cphase::dynamics::SimConfig::default());
}
