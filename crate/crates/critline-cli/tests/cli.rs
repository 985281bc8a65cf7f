use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn critline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critline")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("stderr is not one JSON record ({e}): {text}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn theta_check_passes_with_small_residuals() {
    let out = critline(&["theta-check", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["all_pass"], true);
    let worst = v["rows"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn scan_recovers_first_zeta_zeros() {
    let out = critline(&["scan", "--t-min", "10", "--t-max", "30"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_lo,t_hi,t_zero,f_residual,iterations"));
    let zeros: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    let expected = [14.134_725_141_734_694, 21.022_039_638_771_555, 25.010_857_580_145_69];
    assert_eq!(zeros.len(), 3);
    for (z, e) in zeros.iter().zip(expected) {
        assert!((z - e).abs() < 1e-6, "{z} vs {e}");
    }
}

#[test]
fn region_grid_is_consistent() {
    let out = critline(&["region", "--x-min", "-3", "--x-max", "3", "--y-min", "-3", "--y-max", "3", "--step", "0.05"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("x,y,inside,label,margin\n"));
    assert_eq!(text.lines().count(), 1 + 121 * 121);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.toml", "coefficients = [1, 0.5]\nshifts = [0, 1]\nz_re = 0.3\nz_im = 0.1\n");
    let mut files = Vec::new();
    for (k, workers) in ["1", "3", "1"].iter().enumerate() {
        let out_path = dir.path().join(format!("scan{k}.json"));
        let out = critline(&[
            "scan",
            "--config",
            &cfg,
            "--t-max",
            "30",
            "--workers",
            workers,
            "--format",
            "json",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        files.push(std::fs::read(out_path).unwrap());
    }
    assert!(files.windows(2).all(|w| w[0] == w[1]));
    let v: Value = serde_json::from_slice(&files[0]).unwrap();
    assert_eq!(v.as_object().unwrap().keys().next().map(String::as_str), Some("schema_version"));
    assert_eq!(critline(&["limits"]).stdout, critline(&["limits"]).stdout);
}

#[test]
fn json_config_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"coefficients":[1],"shifts":[0],"z_re":0,"z_im":0}"#);
    let out = critline(&["eval", "--config", &cfg, "--t-max", "1", "--step", "0.5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn missing_key_exits_with_config_status() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "coefficients = [1]\nz_re = 0\nz_im = 0\n");
    let out = critline(&["scan", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    let rec = error_record(&out);
    assert_eq!(rec["error"], "parse");
    assert!(rec["message"].as_str().unwrap().contains("shifts"));
}

#[test]
fn z_outside_region_exits_with_config_status() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "far.toml", "coefficients = [1]\nshifts = [0]\nz_re = 2\nz_im = 2\n");
    let out = critline(&["eval", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(error_record(&out)["message"].as_str().unwrap().contains("region"));
}

#[test]
fn usage_errors_exit_with_config_status() {
    for args in [&["frobnicate"][..], &["scan", "--workers", "0"], &["scan", "--format", "xml"], &[]] {
        let out = critline(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert_eq!(error_record(&out)["error"], "usage");
    }
    assert!(critline(&["--help"]).status.success());
}

#[test]
fn numeric_failures_report_the_offending_t() {
    let out = critline(&["eval", "--t-min", "100000", "--t-max", "100001", "--step", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let rec = error_record(&out);
    assert_eq!(rec["error"], "numeric");
    assert_eq!(rec["t"], 100000.0);
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = critline(&["scan", "--config", "/nonexistent/cfg.toml"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "io");
}
