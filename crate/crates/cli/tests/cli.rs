use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const IDEAL: &str = r#"{"gas":"ideal","n":3,"sigma0":0,"intensity":1,"calibration":{"rho_inf":1},
 "grid":{"r_start":1.3,"r_end":6,"points":801},"viscosity":{"eta":0.0075,"zeta":0}}"#;

const VDW: &str = r#"{"gas":"vdw","n":3,"sigma0":-0.693,"intensity":1,"calibration":{"rho_inf":1.587},
 "grid":{"r_start":0.8,"r_end":50,"points":200,"spacing":"log"}}"#;

fn srcflow(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_srcflow"));
    cmd.arg(args[0]).arg("--config").arg(&cfg).arg("--out").arg(dir.join("out")).args(&args[1..]);
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn calibrate_prints_c0() {
    let dir = TempDir::new().unwrap();
    let o = srcflow(dir.path(), IDEAL, &["calibrate"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "2.5\n");
}

#[test]
fn below_existence_radius_is_a_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let o = srcflow(dir.path(), &IDEAL.replace("1.3", "0.5"), &["euler-profile"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("no solution branch"), "{err}");
    let json: Value = serde_json::from_str(&err[err.find('{').unwrap()..]).unwrap();
    assert_eq!(json["status"], "numerical-failure");
    assert_eq!(json["kind"], "no-solution");
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let o = srcflow(dir.path(), IDEAL, &["phases"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("phases defined only for vdw"));

    let o = srcflow(dir.path(), &IDEAL.replace("\"n\":3", "\"n\":3,\"extra\":1"), &["calibrate"]);
    assert_eq!(o.status.code(), Some(1));

    let o = srcflow(dir.path(), &IDEAL.replace("\"rho_inf\":1", "\"rho_inf\":1,\"c0\":2"), &["calibrate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for cmd in ["euler-profile", "ns-profile"] {
        assert!(srcflow(a.path(), IDEAL, &[cmd]).status.success());
        assert!(srcflow(b.path(), IDEAL, &[cmd]).status.success());
    }
    for name in ["euler_higher.csv", "ns_profile.csv", "ns_summary.json"] {
        let x = fs::read(a.path().join("out").join(name)).unwrap();
        let y = fs::read(b.path().join("out").join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn euler_csv_round_trips_through_validate() {
    let dir = TempDir::new().unwrap();
    for branch in ["lower", "higher"] {
        let o = srcflow(dir.path(), IDEAL, &["euler-profile", "--branch", branch]);
        assert!(o.status.success(), "{}", stderr(&o));
        let csv = dir.path().join("out").join(format!("euler_{branch}.csv"));
        let text = fs::read_to_string(&csv).unwrap();
        assert!(text.starts_with("r,v,rho,T,p,U,phase\n"));
        assert_eq!(text.lines().count(), 802);
        let o = srcflow(dir.path(), IDEAL, &["validate", "--input", csv.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stdout(&o));
    }
}

/// Replaces the value in `column` of data row `row` (1-based).
fn tamper(src: &Path, dst: &Path, row: usize, column: usize, value: &str) {
    let text = fs::read_to_string(src).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let mut fields: Vec<&str> = lines[row].split(',').collect();
    assert_ne!(fields[column], value);
    fields[column] = value;
    lines[row] = fields.join(",");
    fs::write(dst, lines.join("\n") + "\n").unwrap();
}

#[test]
fn tampered_profiles_fail_validation() {
    let dir = TempDir::new().unwrap();
    assert!(srcflow(dir.path(), IDEAL, &["euler-profile"]).status.success());
    let csv = dir.path().join("out/euler_higher.csv");
    let bad = dir.path().join("bad.csv");
    for (column, value) in [(1, "1.2"), (2, "0.5"), (5, "0.0")] {
        tamper(&csv, &bad, 10, column, value);
        let o = srcflow(dir.path(), IDEAL, &["validate", "--input", bad.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(3), "column {column}: {}", stdout(&o));
        assert!(stdout(&o).contains("FAIL"));
    }
}

#[test]
fn vdw_phases_and_label_tampering() {
    let dir = TempDir::new().unwrap();
    let o = srcflow(dir.path(), VDW, &["phases"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = dir.path().join("out/phases_higher.csv");
    let labels: Vec<String> =
        fs::read_to_string(&csv).unwrap().lines().skip(1).map(|l| l.rsplit(',').next().unwrap().to_owned()).collect();
    let mut runs = labels.clone();
    runs.dedup();
    assert_eq!(runs, ["0.5", "1.0"]);

    let o = srcflow(dir.path(), VDW, &["validate", "--input", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let bad = dir.path().join("bad.csv");
    tamper(&csv, &bad, 100, 6, "0.0");
    let o = srcflow(dir.path(), VDW, &["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL phase labels"));

    let o = srcflow(dir.path(), VDW, &["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn ns_profile_summary_and_sweep() {
    let dir = TempDir::new().unwrap();
    let o = srcflow(dir.path(), IDEAL, &["ns-profile"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: Value = serde_json::from_slice(&fs::read(dir.path().join("out/ns_summary.json")).unwrap()).unwrap();
    for key in ["mu", "r_step", "step_width", "residual_norm", "newton_iters"] {
        assert!(summary.get(key).is_some(), "{key}");
    }
    assert_eq!(summary["mu"].as_f64(), Some(0.01));
    let r_step = summary["r_step"].as_f64().unwrap();
    assert!(r_step > 1.3 && r_step < 1.5, "{r_step}");

    let csv = dir.path().join("out/ns_profile.csv");
    let o = srcflow(dir.path(), IDEAL, &["validate", "--input", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS viscous residual"));

    let o = srcflow(dir.path(), IDEAL, &["ns-profile", "--mu-sweep", "0.04,0.02"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let sweep: Value = serde_json::from_slice(&fs::read(dir.path().join("out/ns_summary.json")).unwrap()).unwrap();
    let widths: Vec<f64> = sweep.as_array().unwrap().iter().map(|s| s["step_width"].as_f64().unwrap()).collect();
    assert_eq!(widths.len(), 2);
    assert!(widths[1] < widths[0], "{widths:?}");

    // a profile solved with another viscosity fails against the configured one
    let other = dir.path().join("out/ns_profile_0.csv");
    let o = srcflow(dir.path(), IDEAL, &["validate", "--input", other.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = srcflow(dir.path(), IDEAL, &["validate", "--input", other.to_str().unwrap(), "--mu-sweep", "0.04"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn unresolved_viscous_solve_reports_diagnostics() {
    let dir = TempDir::new().unwrap();
    let coarse = IDEAL
        .replace("\"r_start\":1.3,\"r_end\":6,\"points\":801", "\"r_start\":2,\"r_end\":20,\"points\":50,\"spacing\":\"log\"");
    let o = srcflow(dir.path(), &coarse, &["ns-profile"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    let json: Value = serde_json::from_str(&err[err.find('{').unwrap()..]).unwrap();
    assert_eq!(json["status"], "numerical-failure");
    assert_eq!(json["kind"], "non-convergence");
    assert!(json["details"]["last_iterate"].as_array().unwrap().len() == 50);
    assert!(!dir.path().join("out/ns_summary.json").exists());
}

#[test]
fn expansion_orders() {
    let dir = TempDir::new().unwrap();
    let base = r#"{"gas":"GAS","n":3,"sigma0":0,"intensity":0.01,"calibration":{"c0":1},
      "grid":{"r_start":0.5,"r_end":2,"points":20},"viscosity":{"eta":0.75,"zeta":0},
      "expansion":{"regime":"REGIME","order":1}}"#;
    for (gas, regime, expected) in
        [("ideal", "small", 2.0), ("ideal", "large", 2.0), ("ideal", "regular", 4.0), ("vdw", "large", 2.0)]
    {
        let cfg = base.replace("GAS", gas).replace("REGIME", regime);
        let o = srcflow(dir.path(), &cfg, &["expand"]);
        assert!(o.status.success(), "{gas} {regime}: {}", stderr(&o));
        let report: Value = serde_json::from_slice(&fs::read(dir.path().join("out/expansion.json")).unwrap()).unwrap();
        assert_eq!(report["regime"], regime);
        assert_eq!(report["pass"], true);
        let order = report["fitted_order"].as_f64().unwrap();
        assert!((order - expected).abs() < 0.1, "{gas} {regime}: {order}");
        let rows = fs::read_to_string(dir.path().join("out/expansion.csv")).unwrap();
        assert_eq!(rows.lines().count(), 21);
    }
    let cfg = base.replace("GAS", "vdw").replace("REGIME", "small");
    assert_eq!(srcflow(dir.path(), &cfg, &["expand"]).status.code(), Some(1));
}
