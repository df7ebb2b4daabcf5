//! End-to-end tests of the `steklov` binary: config handling, artifact
//! contracts, determinism, and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_steklov")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("steklov-cli-test-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_with_config(dir: &Path, config: &str, out_name: &str) -> (Output, PathBuf) {
    let config_path = dir.join("config.json");
    fs::write(&config_path, config).unwrap();
    let out_prefix = dir.join(out_name);
    let output = Command::new(bin())
        .arg("--config")
        .arg(&config_path)
        .arg("--out")
        .arg(&out_prefix)
        .output()
        .expect("binary runs");
    (output, out_prefix)
}

#[test]
fn spectrum_neumann_first_row_is_the_zero_mode() {
    let dir = scratch("spectrum");
    let config = r#"{"command":"spectrum","m":4,"n":1,"eps":0.01,"delta":1.0,
        "base":{"kind":"circle","length":6.283185307179586},"outer_bc":"neumann",
        "k_max":3,"j_max":3}"#;
    let (output, prefix) = run_with_config(&dir, config, "run");
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );

    let csv = fs::read_to_string(format!("{}.spectrum.csv", prefix.display())).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sigma,k,j,multiplicity,cluster_target,scaled_eps_sigma"
    );
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(fields[1], "0");
    assert_eq!(fields[2], "0");

    // JSON metadata carries the certification bound
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{}.json", prefix.display())).unwrap())
            .unwrap();
    assert!(json["complete_below"].as_f64().unwrap() > 0.0);
    assert!(fs::metadata(format!("{}.clusters.csv", prefix.display())).is_ok());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = scratch("determinism");
    let config = r#"{"command":"sweep","m":3,"n":1,"delta":1.0,
        "base":{"kind":"circle","length":6.283185307179586},"outer_bc":"dirichlet",
        "k":1,"j":0,"eps_list":[1e-3,1e-4,1e-5,1e-6]}"#;
    let (o1, p1) = run_with_config(&dir, config, "a");
    assert!(o1.status.success());
    let (o2, p2) = run_with_config(&dir, config, "b");
    assert!(o2.status.success());
    for suffix in ["sweep.csv", "json"] {
        let a = fs::read(format!("{}.{suffix}", p1.display())).unwrap();
        let b = fs::read(format!("{}.{suffix}", p2.display())).unwrap();
        assert_eq!(a, b, "artifact {suffix} differs between runs");
    }
    // thread count must not change the bytes either
    let config_path = dir.join("config.json");
    let out3 = dir.join("c");
    let o3 = Command::new(bin())
        .arg("--config")
        .arg(&config_path)
        .arg("--out")
        .arg(&out3)
        .arg("--threads")
        .arg("2")
        .output()
        .unwrap();
    assert!(o3.status.success());
    let a = fs::read(format!("{}.sweep.csv", p1.display())).unwrap();
    let c = fs::read(format!("{}.sweep.csv", out3.display())).unwrap();
    assert_eq!(a, c);
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn exact_law_sweep_has_zero_residuals() {
    // codimension-2 Dirichlet (0,0) with delta = 1 obeys the log law exactly
    let dir = scratch("exactlaw");
    let config = r#"{"command":"sweep","m":3,"n":1,"delta":1.0,
        "base":{"kind":"circle","length":6.283185307179586},"outer_bc":"dirichlet",
        "k":0,"j":0,"eps_list":[1e-2,1e-3,1e-4,1e-5]}"#;
    let (output, prefix) = run_with_config(&dir, config, "run");
    assert!(output.status.success());
    let csv = fs::read_to_string(format!("{}.sweep.csv", prefix.display())).unwrap();
    for line in csv.lines().skip(1) {
        let residual: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(
            residual.abs() <= 1e-13,
            "nonzero residual in exact-law sweep: {residual}"
        );
    }
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{}.json", prefix.display())).unwrap())
            .unwrap();
    assert!(json["fit"]["exact_law"].as_bool().unwrap());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn codimension_one_is_rejected() {
    let dir = scratch("codim");
    let config = r#"{"command":"spectrum","m":4,"n":3,"eps":0.01,"delta":1.0,
        "base":{"kind":"custom","spectrum":[[0.0,1]],"volume":1.0},"outer_bc":"neumann",
        "k_max":2,"j_max":2}"#;
    let (output, prefix) = run_with_config(&dir, config, "run");
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("codimension"), "stderr: {stderr}");
    // no partial outputs
    assert!(fs::metadata(format!("{}.spectrum.csv", prefix.display())).is_err());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = scratch("strict");
    let config = r#"{"command":"torus","eps":0.25,"k_max":4,"sneaky":true}"#;
    let (output, _) = run_with_config(&dir, config, "run");
    assert!(!output.status.success());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn torus_run_produces_expected_values() {
    let dir = scratch("torus");
    let config = r#"{"command":"torus","eps":0.25,"k_max":8}"#;
    let (output, prefix) = run_with_config(&dir, config, "run");
    assert!(output.status.success());
    let csv = fs::read_to_string(format!("{}.spectrum.csv", prefix.display())).unwrap();
    let mut rows = csv.lines().skip(1);
    let first: Vec<&str> = rows.next().unwrap().split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    // 2/(1-2*0.25) = 4 appears
    assert!(csv
        .lines()
        .any(|l| l.starts_with("4.0000000000000000e0,0,1,1")));
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn quick_verify_passes_and_reports() {
    let dir = scratch("verify");
    // a reduced grid keeps the test quick; the acceptance suite runs the
    // full certification grid
    let config = r#"{"command":"verify","pairs":[[3,1],[4,0]],"k_max":1,"j_max":1,
        "eps_list":[0.1]}"#;
    let (output, prefix) = run_with_config(&dir, config, "run");
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{}.json", prefix.display())).unwrap())
            .unwrap();
    assert_eq!(json["failures"].as_u64().unwrap(), 0);
    assert!(json["max_relative_deviation"].as_f64().unwrap() <= 1e-8);
    let csv = fs::read_to_string(format!("{}.verify.csv", prefix.display())).unwrap();
    assert!(csv.starts_with("m,n,eps,outer_bc,k,j,sigma_closed,sigma_oracle,deviation"));
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn point_and_gap_commands() {
    let dir = scratch("pointgap");
    let (output, prefix) = run_with_config(
        &dir,
        r#"{"command":"point","m":3,"eps":0.1,"delta":1.0,"k_max":5}"#,
        "pt",
    );
    assert!(output.status.success());
    let csv = fs::read_to_string(format!("{}.point.csv", prefix.display())).unwrap();
    assert_eq!(csv.lines().count(), 7); // header + k = 0..=5

    let config = r#"{"command":"gap","m":5,"n":2,"delta":1.0,
        "base":{"kind":"round_sphere","dim":2,"radius":1.0},
        "eps_list":[1e-2,1e-3,1e-4],"k_max":8,"j_max":4}"#;
    let (output, prefix) = run_with_config(&dir, config, "gap");
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{}.json", prefix.display())).unwrap())
            .unwrap();
    let slope = json["loglog_slope"].as_f64().unwrap();
    assert!((slope + 0.5).abs() < 0.05, "slope {slope}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn modes_command_emits_asymptotics() {
    let dir = scratch("modes");
    let config = r#"{"command":"modes","m":5,"n":2,"eps":0.001,"delta":1.0,
        "base":{"kind":"round_sphere","dim":2,"radius":1.0},"outer_bc":"dirichlet",
        "k_max":2,"j_max":2}"#;
    let (output, prefix) = run_with_config(&dir, config, "run");
    assert!(output.status.success());
    let csv = fs::read_to_string(format!("{}.modes.csv", prefix.display())).unwrap();
    assert!(csv.starts_with("k,j,lambda,mu,nu,l,multiplicity,sigma,sigma_asymptotic"));
    assert_eq!(csv.lines().count(), 1 + 9);
    // sigma and its asymptotic prediction agree to ~eps for the (0,1) mode
    let row: Vec<&str> = csv.lines().nth(2).unwrap().split(',').collect();
    let sigma: f64 = row[7].parse().unwrap();
    let asym: f64 = row[8].parse().unwrap();
    assert!((sigma - asym).abs() / sigma < 0.01);
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn missing_config_file_is_an_error() {
    let output = Command::new(bin())
        .arg("--config")
        .arg("/nonexistent/config.json")
        .arg("--out")
        .arg("/tmp/never")
        .output()
        .unwrap();
    assert!(!output.status.success());
}
