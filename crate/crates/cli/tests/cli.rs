use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn qpinem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpinem"))
        .args(args)
        .output()
        .unwrap()
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        sub,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    qpinem(&args)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.json");
    fs::write(&p, text).unwrap();
    p
}

const SMALL: &str = r#"{
  "electron": {"kinetic_energy_ev": 100000},
  "photon": {"energy_ev": 1.5},
  "coupling": {"beta0_abs": 0.2},
  "light": [
    {"label": "coherent", "state": {"family": "coherent", "n_mean": 100}},
    {"label": "fock", "state": {"family": "fock", "n0": 100}}
  ],
  "grids": {
    "z": {"start": 0, "stop": 3, "samples": 7, "unit": "mm"},
    "tau": {"start": -0.5, "stop": 0.5, "samples": 16}
  }
}"#;

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(qpinem(&["--help"]).status.code(), Some(0));
    assert_eq!(qpinem(&["--version"]).status.code(), Some(0));
    assert_eq!(qpinem(&["map"]).status.code(), Some(1));
}

#[test]
fn map_has_one_row_per_grid_point() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    assert!(run("map", &cfg, &out, &[]).status.success());
    let csv = fs::read_to_string(out.join("map_coherent.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("z,tau,density"));
    assert_eq!(lines.count(), 7 * 16);
    for row in csv.lines().skip(1) {
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 3);
    }
}

#[test]
fn sidecar_hash_matches_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    assert!(run("spectrum", &cfg, &out, &[]).status.success());
    let bytes = fs::read(out.join("spectrum_fock.csv")).unwrap();
    let side: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("spectrum_fock.json")).unwrap()).unwrap();
    assert_eq!(side["sha256"], hex::encode(Sha256::digest(&bytes)));
    assert_eq!(side["subcommand"], "spectrum");
    assert_eq!(side["light_label"], "fock");
    assert_eq!(side["config"]["light"][1]["state"]["n0"], 100);
    assert!(side["config"]["output_dir"].is_null());
}

#[test]
fn fwhm_has_one_column_per_light() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = example("compression.json");
    assert!(run("fwhm", &cfg, &out, &[]).status.success());
    let csv = fs::read_to_string(out.join("fwhm.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("z,fwhm_coherent,fwhm_amplitude,fwhm_phase,fwhm_mpu")
    );
    assert_eq!(csv.lines().count(), 401);
}

#[test]
fn invalid_config_names_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let bad = SMALL.replace("\"n_mean\": 100", "\"n_mean\": -3");
    let o = run("state", &write_config(tmp.path(), &bad), &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("light[0].state.n_mean"));

    let unknown = SMALL.replace("\"coupling\": {", "\"coupling\": {\"bogus\": 1, ");
    let o = run("state", &write_config(tmp.path(), &unknown), &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));

    let o = run("delta", &write_config(tmp.path(), SMALL), &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta"));
}

#[test]
fn unitarity_violation_exits_two_with_residual() {
    let tmp = tempfile::tempdir().unwrap();
    let strict = SMALL.replace(
        "\"grids\"",
        "\"tolerances\": {\"unitarity\": 1e-30},\n  \"grids\"",
    );
    let o = run(
        "spectrum",
        &write_config(tmp.path(), &strict),
        &tmp.path().join("o"),
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("residual"));
}

#[test]
fn non_integer_harmonic_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = SMALL.replace(
        "\"grids\": {",
        "\"delta\": {\"m\": [1.5], \"beta0_sample_abs\": 0.1},\n  \"grids\": {\"d\": {\"start\": 0, \"stop\": 1, \"samples\": 3}, ",
    );
    let o = run(
        "delta",
        &write_config(tmp.path(), &cfg),
        &tmp.path().join("o"),
        &[],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn mode_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run("map", &cfg, &a, &["--mode", "quadratic"])
        .status
        .success());
    assert!(run("map", &cfg, &b, &["--mode", "exact"]).status.success());
    let qa = fs::read(a.join("map_coherent.csv")).unwrap();
    let qb = fs::read(b.join("map_coherent.csv")).unwrap();
    assert_ne!(qa, qb);
    let side: serde_json::Value =
        serde_json::from_slice(&fs::read(b.join("map_coherent.json")).unwrap()).unwrap();
    assert_eq!(side["config"]["mode"], "exact");
}

#[test]
fn thread_count_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("o");
    let o = Command::new(env!("CARGO_BIN_EXE_qpinem"))
        .args([
            "map",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .env("QPINEM_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_qpinem"))
        .args(["map", "--config", cfg.to_str().unwrap()])
        .env("QPINEM_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
