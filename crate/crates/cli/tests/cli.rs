use std::path::Path;
use std::process::{Command, Output};

fn rotor(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotor"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let (comments, rest): (Vec<&str>, Vec<&str>) = text.lines().partition(|l| l.starts_with('#'));
    let header = rest[0].split(',').map(String::from).collect();
    let rows = rest[1..]
        .iter()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (comments.into_iter().map(String::from).collect(), header, rows)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(rotor(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(rotor(&["dynamics", "simulate", "--t"], dir.path()).status.code(), Some(2));
    assert_eq!(rotor(&["--jmax", "2", "--hbar", "0", "--show-config"], dir.path()).status.code(), Some(3));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"unknown_field": 1}"#).unwrap();
    assert_eq!(
        rotor(&["--config", bad.to_str().unwrap(), "--show-config"], dir.path()).status.code(),
        Some(3)
    );
    assert_eq!(rotor(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn show_config_prints_defaults_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    std::fs::write(&file, r#"{"hbar": 0.5, "seed": 11}"#).unwrap();
    let out = rotor(&["--config", file.to_str().unwrap(), "--seed", "12", "--show-config"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["hbar"], 0.5);
    assert_eq!(v["seed"], 12);
    assert_eq!(v["jmax"], 3);
    assert!(v["tolerances"]["overlap"].is_number());
}

#[test]
fn dynamics_csv_is_monotone_and_conserving() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotor(
        &["dynamics", "simulate", "--I", "1,2,3", "--rho", "1,0.5,0.2", "--t", "10", "--dt", "1e-3"],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let (comments, header, rows) = read_csv(&dir.path().join("trajectory.csv"));
    let hash = comments[0].strip_prefix("# config_hash=").unwrap();
    assert!(hash.len() == 64 && hash.chars().all(|c| c.is_ascii_hexdigit()));
    assert_eq!(&header[..6], ["t", "rho1", "rho2", "rho3", "H", "rho_sq"]);
    assert_eq!(header.len(), 15);
    assert_eq!(rows.len(), 10_001);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    let (h0, c0) = (rows[0][4], rows[0][5]);
    for r in &rows {
        assert!((r[4] - h0).abs() < 1e-9 * h0);
        assert!((r[5] - c0).abs() < 1e-9 * c0);
    }
    assert!((rows.last().unwrap()[0] - 10.0).abs() < 1e-12);
}

#[test]
fn state_round_trip_and_wigner_expect() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = rotor(&["state", "make", "--j", "1", "--m", "0", "--k", "1"], d);
    assert!(out.status.success(), "{out:?}");
    let state = d.join("j1m0k1.json");
    let hash = json(&state)["config_hash"].as_str().unwrap().to_string();
    assert_eq!(hash.len(), 64);

    let out = rotor(&["wigner", "expect", "--state", state.to_str().unwrap()], d);
    assert!(out.status.success(), "{out:?}");
    let v = json(&d.join("wigner_expect.json"));
    assert_eq!(v["config_hash"], hash.as_str());
    let routes = v["routes"].as_array().unwrap();
    assert_eq!(routes.len(), 7);
    for r in routes {
        assert!(r["operator"].is_number() && r["quadrature"].is_number());
        assert!(r["gap"].as_f64().unwrap() < r["bound"].as_f64().unwrap());
    }
    let rho3 = routes.iter().find(|r| r["observable"] == "rho3").unwrap();
    assert!((rho3["quadrature"].as_f64().unwrap() - 1.0).abs() < 1e-4);

    let evolved = d.join("e.json");
    let out = rotor(&["state", "evolve", "--state", state.to_str().unwrap(), "--t", "0.7", "--output", evolved.to_str().unwrap()], d);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(json(&evolved)["jmax"], 3);

    let out = rotor(
        &["wigner", "eval", "--state", state.to_str().unwrap(), "--euler", "0.3,1.2,-0.4", "--rho", "0,0,1"],
        d,
    );
    assert!(out.status.success(), "{out:?}");
    let e = json(&d.join("wigner_eval.json"));
    assert!(e["value"].is_number());
    let (marginal, density) = (e["momentum_marginal"].as_f64().unwrap(), e["density"].as_f64().unwrap());
    assert!((marginal - density).abs() < 1e-3 * density, "{marginal} vs {density}");

    // A state made with another ħ is a configuration error.
    let out = rotor(&["--hbar", "0.5", "wigner", "expect", "--state", state.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn limit_scan_and_reduction_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = rotor(&["wigner", "limit", "--hbars", "0.5,0.25"], d);
    assert!(out.status.success(), "{out:?}");
    let (_, header, rows) = read_csv(&d.join("limit.csv"));
    assert_eq!(header[0], "hbar");
    assert!(rows[1][5] < rows[0][5]);

    let out = rotor(&["--jmax", "1", "coherence", "scan", "--gammas", "0.05,0.4"], d);
    assert!(out.status.success(), "{out:?}");
    let (comments, _, rows) = read_csv(&d.join("coherence_scan.csv"));
    assert!(comments.iter().any(|c| c.starts_with("# crossover_gamma=")));
    assert_eq!(rows.len(), 2);

    let out = rotor(&["su2", "reduce", "--section", "momenta", "--n", "3"], d);
    assert!(out.status.success(), "{out:?}");
    let (comments, header, rows) = read_csv(&d.join("su2_section.csv"));
    assert!(comments.iter().any(|c| c.starts_with("# periodicity_residual=")));
    assert_eq!(header.last().unwrap(), "f_so3");
    assert_eq!(rows.len(), 9);
    assert!(rows[4][8] > rows[0][8]);
}

#[test]
fn verify_subset_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotor(&["verify", "all", "--only", "curvature,haar"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let v = json(&dir.path().join("summary.json"));
    assert_eq!(v["passed"], 2);
    assert_eq!(v["suites"][0]["suite"], "curvature");
    assert_eq!(rotor(&["verify", "all", "--only", "nope"], dir.path()).status.code(), Some(2));
}
