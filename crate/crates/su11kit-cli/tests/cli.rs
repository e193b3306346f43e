//! End-to-end tests of the binary: exit codes, file formats, and
//! reproducibility.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su11kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_su11kit"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn verify_repkit_passes() {
    let out = run(&["verify", "--suite", "repkit", "--lambda", "2", "--dim", "64"]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc[0]["suite"], "repkit");
    assert_eq!(doc[0]["pass"], true);
}

#[test]
fn verify_povm_below_weight_one_expects_negative_gap() {
    let out = run(&["verify", "--suite", "povm", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let checks = doc[0]["checks"].as_array().unwrap();
    let gap = checks
        .iter()
        .find(|c| c["name"] == "hyponormality_gap_negative")
        .expect("negative-gap check present");
    assert_eq!(gap["pass"], true);
    assert!(gap["value"].as_f64().unwrap() < -1e-3);
}

#[test]
fn verify_rejects_invalid_weight() {
    let out = run(&["verify", "--lambda", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_fails_with_exit_one_on_unreachable_tolerance() {
    let out = run(&[
        "verify",
        "--suite",
        "repkit",
        "--lambda",
        "2",
        "--dim",
        "64",
        "--tol",
        "algebraic=1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1), "{:?}", out);
}

#[test]
fn density_of_the_lowest_state_is_flat_at_weight_two() {
    let out = run(&[
        "density", "--lambda", "2", "--state", "0", "--nodes", "12x12", "--r-max", "0.9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let mut rows = 0;
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("re") {
            continue;
        }
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((cols[2] - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        rows += 1;
    }
    assert!(rows > 50, "expected interior grid points, got {rows}");
    assert!(!text.contains('\r'), "LF endings only");
}

#[test]
fn halfplane_density_integrates_to_one() {
    // The far field decays like |eta|^{-2 lambda + 2} * Im eta, so the mass
    // beyond the box scales as extent^{-3} at lambda = 3; forty keeps that
    // below the midpoint-rule error.
    let out = run(&[
        "density",
        "--domain",
        "halfplane",
        "--lambda",
        "3",
        "--state",
        "1",
        "--nodes",
        "2400x1600",
        "--extent",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let extent = 40.0;
    let (nx, ny) = (2400.0, 1600.0);
    let cell = (2.0 * extent / nx) * (extent / ny);
    let mut mass = 0.0;
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("re") {
            continue;
        }
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        mass += cols[2] * cell;
    }
    assert!((mass - 1.0).abs() < 1e-3, "post-hoc mass {mass}");
}

#[test]
fn density_rejects_weight_at_or_below_one() {
    let out = run(&["density", "--lambda", "1", "--state", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not normalizable"), "{err}");
}

#[test]
fn density_rejects_malformed_state_specs() {
    let out = run(&["density", "--lambda", "2", "--state", "0:abc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sampling_is_reproducible_per_seed() {
    let args = [
        "sample", "--lambda", "2", "--state", "0", "--n", "500", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout_str(&a), stdout_str(&b), "same seed, same bytes");
    let c = run(&[
        "sample", "--lambda", "2", "--state", "0", "--n", "500", "--seed", "43",
    ]);
    assert_ne!(stdout_str(&a), stdout_str(&c));
    let rows = stdout_str(&a)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("re"))
        .count();
    assert_eq!(rows, 500);
}

#[test]
fn sample_rejects_zero_draws() {
    let out = run(&["sample", "--lambda", "2", "--state", "0", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extension_reports_have_the_stable_schema() {
    let out = run(&["extension", "--construction", "heterodyne", "--boson-dim", "16"]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    for key in [
        "construction",
        "dims",
        "normality_residual",
        "extension_residual",
        "ancilla",
        "test_family",
        "grid_spec",
        "pass",
    ] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["pass"], true);

    let out = run(&["extension", "--construction", "lambda1", "--grid-size", "512"]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(
        doc["domain_violation_residual"].as_f64().unwrap() > 1e-2,
        "domain-violation line present and detected"
    );

    let out = run(&[
        "extension",
        "--construction",
        "lambda_gt1",
        "--k",
        "0.5",
        "--grid-size",
        "256",
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
}

#[test]
fn operator_tables_follow_the_export_schema() {
    let out = run(&["dump", "operator", "--which", "l0", "--lambda", "2", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["dim"], 3);
    assert_eq!(doc["basis_tag"], "su11_number");
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 9);
    // Row-major diagonal (2, 4, 6).
    assert_eq!(entries[0][0], 2.0);
    assert_eq!(entries[4][0], 4.0);
    assert_eq!(entries[8][0], 6.0);
}

#[test]
fn reduction_table_marks_the_threshold() {
    let out = run(&["dump", "reduction", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["subnormal"], false);
    assert_eq!(rows[1]["subnormal"], true);
    assert_eq!(rows[3]["lambda"], 2.0);
    assert_eq!(rows[3]["k"], 0.5);
}

#[test]
fn config_file_yields_to_explicit_flags() {
    let dir = std::env::temp_dir().join(format!("su11kit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(&path, r#"{"lambda": 3.0, "dim": 3}"#).unwrap();

    // Config alone: weight three on the diagonal.
    let out = run(&["dump", "operator", "--which", "l0", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["entries"][0][0], 3.0);

    // Flag wins over the file.
    let out = run(&[
        "dump", "operator", "--which", "l0", "--lambda", "2",
        "--config", path.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["entries"][0][0], 2.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn thread_cap_does_not_change_output_bytes() {
    let args = [
        "density", "--lambda", "2.5", "--state", "0:0.6;1:0,0.8", "--nodes", "40x40",
        "--r-max", "0.95",
    ];
    let single = run_env(&args, &[("SU11KIT_THREADS", "1")]);
    let quad = run_env(&args, &[("SU11KIT_THREADS", "4")]);
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(stdout_str(&single), stdout_str(&quad));
}

#[test]
fn coherent_dump_matches_the_closed_form() {
    let out = run(&[
        "dump", "coherent", "--zeta", "0.5,0", "--lambda", "2", "--dim", "32",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let first_row = text
        .lines()
        .find(|l| !l.starts_with('#') && !l.starts_with('n'))
        .unwrap();
    let cols: Vec<f64> = first_row.split(',').map(|v| v.parse().unwrap()).collect();
    assert!((cols[1] - 0.75).abs() < 1e-15, "c_0 = 0.75 at lambda 2, zeta 1/2");
}

#[test]
fn naimark_dump_exports_matrices() {
    let out = run(&["dump", "naimark", "--dim", "4", "--n", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["dim"], 4);
    assert_eq!(doc["effects"], 3);
    assert_eq!(doc["isometry"].as_array().unwrap().len(), 12 * 4);
    assert_eq!(doc["projective"].as_array().unwrap().len(), 3);
    assert!(doc["reconstruction_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn spectrum_dump_shows_the_nilpotent_annihilation() {
    let out = run(&["dump", "spectrum", "--which", "a", "--lambda", "2", "--dim", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    for ev in doc["eigenvalues"].as_array().unwrap() {
        let m = (ev[0].as_f64().unwrap().powi(2) + ev[1].as_f64().unwrap().powi(2)).sqrt();
        assert!(m < 1e-12);
    }
}
