//! Acceptance criteria at their stated sizes, tolerances and time limits.
//! Each test prints one PASS/FAIL line.

use rotor_cli::config::RunConfig;
use rotor_cli::verify::{self, Check, SuiteReport};
use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

// Runtime limits are only meaningful when criteria do not share the CPU.
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(number: usize, suite: verify::Suite, limit: Duration) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let cfg = RunConfig::default();
    let start = Instant::now();
    let mut report: SuiteReport = suite(&cfg).expect("suite runs");
    let elapsed = start.elapsed();
    let timing = Check::at_most("runtime_s", elapsed.as_secs_f64(), limit.as_secs_f64());
    report.passed += timing.passed as usize;
    report.total += 1;
    report.checks.push(timing);
    println!("criterion {number:>2}: {}", report.line());
    assert!(report.ok(), "criterion {number} failed: {}", report.line());
}

#[test]
fn c01_scalar_curvature() {
    criterion(1, verify::curvature_suite, Duration::from_secs(1));
}

#[test]
fn c02_geometry_suite() {
    criterion(2, verify::geometry_check_suite, Duration::from_secs(10));
}

#[test]
fn c03_dynamics() {
    criterion(3, verify::dynamics_suite, Duration::from_secs(5));
}

#[test]
fn c04_haar_volume() {
    criterion(4, verify::haar_suite, Duration::from_secs(1));
}

#[test]
fn c05_angular_momentum_quantization() {
    criterion(5, verify::quantization_suite, Duration::from_secs(120));
}

#[test]
fn c06_momentum_square_shift() {
    criterion(6, verify::momentum_shift_suite, Duration::from_secs(300));
}

#[test]
fn c07_zero_point_energy() {
    criterion(7, verify::zero_point_suite, Duration::from_secs(300));
}

#[test]
fn c08_overlap_identity() {
    criterion(8, verify::overlap_suite, Duration::from_secs(600));
}

#[test]
fn c09_classical_limit() {
    criterion(9, verify::classical_limit_suite, Duration::from_secs(600));
}

#[test]
fn c10_coherence() {
    criterion(10, verify::coherence_suite, Duration::from_secs(300));
}

#[test]
fn c11_su2_reduction() {
    criterion(11, verify::su2_suite, Duration::from_secs(300));
}

fn small_config() -> serde_json::Value {
    serde_json::json!({
        "jmax": 1,
        "grids": { "ball": { "radial": 8, "polar": 8, "azimuthal": 8 }, "euler_degree": 12 },
        "verify": {
            "geometry_points": 4,
            "basis_jmax": 1,
            "random_states": 2,
            "overlap_pairs": 1,
            "limit_hbars": [0.5, 0.25],
            "coherence_states": 1,
            "coherence_points": 1,
            "coherence_directions": 2,
            "su2_angular_nodes": 4,
            "su2_momentum_nodes": 2
        }
    })
}

fn run_verify(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, small_config().to_string()).unwrap();
    let out = dir.join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_rotor"))
        .args(["verify", "all", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .env("ROTOR_THREADS", "2")
        .output()
        .unwrap();
    // Failing suites exit 1; any other code means the run itself broke.
    assert!(matches!(status.status.code(), Some(0 | 1)), "{status:?}");
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn c12_determinism() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (fa, fb) = (run_verify(a.path()), run_verify(b.path()));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    let identical = !fa.is_empty() && fa == fb;
    println!(
        "criterion 12: {} determinism: artifacts {:?} byte-identical across two runs: {identical}",
        if identical { "PASS" } else { "FAIL" },
        names
    );
    assert!(identical);
}
