//! End-to-end runs of the `qopt` binary on small job files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn qopt(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qopt"))
        .arg(command)
        .arg("--config")
        .arg(config)
        .arg("--out-dir")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn write_job(dir: &Path, name: &str, job: &Value) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, serde_json::to_string_pretty(job).unwrap()).unwrap();
    path
}

fn run_ok(command: &str, config: &Path, out: &Path, extra: &[&str]) {
    let o = qopt(command, config, out, extra);
    assert!(
        o.status.success(),
        "{command} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn sample_jobs(dir: &Path) -> Vec<(&'static str, PathBuf)> {
    vec![
        (
            "pnd",
            write_job(dir, "squeezed", &json!({
                "command": "pnd",
                "name": "squeezed",
                "state": { "kind": "squeezed", "r": 1.0 },
                "pnd": { "max_total": 120 }
            })),
        ),
        (
            "wigner",
            write_job(dir, "odd_cat", &json!({
                "command": "wigner",
                "name": "odd_cat",
                "state": { "kind": "cat", "A": [[1.5, 0.0]], "parity": "odd" },
                "grid": { "q": { "min": -6, "max": 6, "n": 61 }, "p": { "min": -6, "max": 6, "n": 61 } }
            })),
        ),
        (
            "epsilon",
            write_job(dir, "pulse", &json!({
                "command": "epsilon",
                "name": "pulse",
                "profile": "1 + 0.3 * sin(2 * t)",
                "times": { "min": 0, "max": 5, "n": 51 },
                "tolerance": 1e-10
            })),
        ),
    ]
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = sample_jobs(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (command, config) in &jobs {
        run_ok(command, config, &a, &["--threads", "1"]);
        run_ok(command, config, &b, &["--threads", "4"]);
    }
    let (sa, sb) = (snapshot(&a), snapshot(&b));
    assert!(sa.len() >= 9);
    assert_eq!(sa, sb);
}

#[test]
fn errors_are_reported_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");

    let missing = qopt("pnd", &dir.path().join("absent.json"), &out, &[]);
    assert_eq!(missing.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"]["operation"], "load_config");

    let bad_grid = write_job(dir.path(), "bad", &json!({
        "command": "wigner",
        "state": { "kind": "vacuum" },
        "grid": { "q": { "min": 4, "max": -4, "n": 41 }, "p": { "min": -4, "max": 4, "n": 41 } }
    }));
    let o = qopt("wigner", &bad_grid, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    let message = err["error"]["message"].as_str().unwrap();
    assert!(message.contains("grid.q"), "{message}");

    let mismatch = qopt("pnd", &bad_grid, &out, &[]);
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(serde_json::from_slice::<Value>(&mismatch.stderr).unwrap()["error"].is_object());

    let odd_vacuum = write_job(dir.path(), "odd", &json!({
        "command": "pnd",
        "state": { "kind": "cat", "A": [[0.0, 0.0]], "parity": "odd" }
    }));
    let o = qopt("pnd", &odd_vacuum, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(serde_json::from_slice::<Value>(&o.stderr).unwrap()["error"]["module"], "cats");
}

#[test]
fn metadata_and_plot_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let jobs = sample_jobs(dir.path());
    run_ok(jobs[0].0, &jobs[0].1, &out, &[]);
    let meta: Value = serde_json::from_str(&fs::read_to_string(out.join("squeezed.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["convention"], qopt::gaussian::CONVENTION_TAG);
    assert_eq!(meta["config"]["command"], "pnd");
    assert_eq!(meta["summary"]["truncation"], "MassReached");
    let outputs: Vec<&str> = meta["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(outputs, ["squeezed.csv", "squeezed.gp", "squeezed.meta.json"]);
    let gp = fs::read_to_string(out.join("squeezed.gp")).unwrap();
    assert!(gp.contains("plot 'squeezed.csv'"), "{gp}");
    assert!(!gp.contains(out.to_str().unwrap()));

    let quiet = write_job(dir.path(), "quiet", &json!({
        "command": "pnd", "name": "quiet", "plot": false, "state": { "kind": "vacuum" }
    }));
    run_ok("pnd", &quiet, &out, &[]);
    assert!(!out.join("quiet.gp").exists());
}

#[test]
fn squeezed_distribution_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let jobs = sample_jobs(dir.path());
    run_ok(jobs[0].0, &jobs[0].1, &out, &[]);
    let (header, rows) = read_csv(&out.join("squeezed.csv"));
    assert_eq!(header, ["n_1", "P"]);
    let r: f64 = 1.0;
    let mut total = 0.0;
    for row in &rows {
        let n = row[0] as u32;
        let expected = if n % 2 == 1 {
            0.0
        } else {
            let m = n / 2;
            let ln = qopt::hermite::ln_factorial(n) - 2.0 * qopt::hermite::ln_factorial(m)
                + 2.0 * m as f64 * (0.5 * r.tanh()).ln();
            ln.exp() / r.cosh()
        };
        assert!((row[1] - expected).abs() <= 1e-9, "n={n}: {} vs {expected}", row[1]);
        total += row[1];
    }
    assert!(total >= 1.0 - 1e-9);
}

#[test]
fn odd_cat_wigner_has_negative_region() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let jobs = sample_jobs(dir.path());
    run_ok(jobs[1].0, &jobs[1].1, &out, &[]);
    let (header, rows) = read_csv(&out.join("odd_cat.csv"));
    assert_eq!(header, ["q", "p", "W"]);
    assert_eq!(rows.len(), 61 * 61);
    let origin = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert!((origin[2] + 2.0).abs() < 1e-12);
    let w = qopt::tomography::WignerGrid::read_csv(&out.join("odd_cat.csv")).unwrap();
    assert!((w.normalization() - 1.0).abs() < 1e-6, "{}", w.normalization());
}

#[test]
fn tomography_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let forward = write_job(dir.path(), "fwd", &json!({
        "command": "tomo-forward",
        "name": "sino",
        "state": { "kind": "squeezed", "r": 0.5 },
        "tomography": { "angles": 90, "x": { "min": -8, "max": 8, "n": 161 } }
    }));
    run_ok("tomo-forward", &forward, &out, &[]);
    let invert = write_job(dir.path(), "inv", &json!({
        "command": "tomo-invert",
        "name": "rec",
        "input": "out/sino.csv",
        "state": { "kind": "squeezed", "r": 0.5 },
        "grid": { "q": { "min": -3, "max": 3, "n": 31 }, "p": { "min": -3, "max": 3, "n": 31 } }
    }));
    run_ok("tomo-invert", &invert, &out, &[]);
    let meta: Value = serde_json::from_str(&fs::read_to_string(out.join("rec.meta.json")).unwrap()).unwrap();
    let rel = meta["summary"]["reference_relative_error"].as_f64().unwrap();
    assert!(rel <= 0.02, "{rel}");
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = write_job(dir.path(), "verify", &json!({ "command": "verify" }));
    let o = qopt("verify", &config, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 9);
}
