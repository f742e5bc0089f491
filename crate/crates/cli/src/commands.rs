//! Subcommand bodies. Each returns the paths it wrote.

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{write_json, CsvArtifact};
use crate::states::{random_rotation, random_state, reference_action_wave, reference_packet, rng};
use crate::verify::{self, Check};
use nalgebra::Vector3;
use rotor_core::coherence::{coherence_scan, empirical_crossover, sphere_directions};
use rotor_core::distributions::{
    classical_limit_gap, expect_h, expect_rho, expect_rho2, overlap, ExpectationReport, LimitObservable,
    MomentumGrid, WignerDistribution,
};
use rotor_core::dynamics::{integrate, PhaseSpacePoint, Scheme};
use rotor_core::geometry::{EulerAngles, EulerGrid, Rotation};
use rotor_core::su2::{
    f_so3, periodicity_residual, project_to_so3, reduce_to_su2, scale_factors, spherical_frame, R4Point,
    ReducedPoint, ReductionOptions, VolumeBookkeeping,
};
use rotor_core::wavefunction::io::StateFile;
use rotor_core::wavefunction::{ProjectionOptions, Propagator, WaveFunction};
use serde::Serialize;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

fn target(cfg: &RunConfig, explicit: Option<&Path>, default_name: &str) -> PathBuf {
    explicit.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir.join(default_name))
}

/// Reads a state file and checks that its ħ matches the run.
pub fn load_state(cfg: &RunConfig, path: &Path) -> Result<WaveFunction, CliError> {
    let text = std::fs::read_to_string(path)?;
    let psi = StateFile::from_json(&text)?.to_state()?;
    if (psi.hbar() - cfg.hbar).abs() > 1e-12 * cfg.hbar {
        return Err(CliError::Config(format!(
            "state {} has hbar = {}, run has hbar = {}",
            path.display(),
            psi.hbar(),
            cfg.hbar
        )));
    }
    Ok(psi)
}

fn fail_unless(ok: bool, what: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed(what.into()))
    }
}

pub fn geometry_check(cfg: &RunConfig, points: Option<usize>, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let mut c = cfg.clone();
    if let Some(n) = points {
        c.verify.geometry_points = n;
    }
    let reports = vec![verify::curvature_suite(&c)?, verify::geometry_check_suite(&c)?];
    let path = write_json(&target(cfg, out, "geometry.json"), &cfg.hash(), &serde_json::json!({ "suites": reports }))?;
    fail_unless(reports.iter().all(|r| r.ok()), "geometry residuals above tolerance")?;
    Ok(path)
}

pub struct SimulateArgs {
    pub inertia: Option<[f64; 3]>,
    pub rho: [f64; 3],
    pub euler: [f64; 3],
    pub t: f64,
    pub dt: f64,
    pub every: usize,
}

pub fn dynamics_simulate(cfg: &RunConfig, a: &SimulateArgs, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let mut c = cfg.clone();
    if let Some(i) = a.inertia {
        c.inertia = i;
        c.validate()?;
    }
    let inertia = c.inertia_tensor();
    let r0 = EulerAngles::new(a.euler[0], a.euler[1], a.euler[2])?.to_rotation();
    let traj = integrate(&PhaseSpacePoint::new(r0, Vector3::from(a.rho)), &inertia, a.t, a.dt, Scheme::Rk4)?;
    let (dh, dc) = traj.conservation_drift(&inertia);
    let mut header = vec!["t", "rho1", "rho2", "rho3", "H", "rho_sq"];
    let names: Vec<String> = (1..=3).flat_map(|i| (1..=3).map(move |j| format!("r{i}{j}"))).collect();
    header.extend(names.iter().map(String::as_str));
    let comments = vec![format!("energy_drift={dh:.16e}"), format!("casimir_drift={dc:.16e}")];
    let mut csv = CsvArtifact::create(&target(&c, out, "trajectory.csv"), &c.hash(), &comments, &header)?;
    let last = traj.samples.len() - 1;
    for (n, (t, p)) in traj.samples.iter().enumerate() {
        if n % a.every.max(1) != 0 && n != last {
            continue;
        }
        let mut row = vec![*t, p.rho[0], p.rho[1], p.rho[2], p.energy(&inertia), p.rho.norm_squared()];
        let m = p.r.matrix();
        row.extend((0..3).flat_map(|i| (0..3).map(move |j| m[(i, j)])));
        csv.row(&row)?;
    }
    csv.finish()
}

pub enum StateKind {
    Basis { j: usize, m: i64, k: i64 },
    Random,
}

pub fn state_make(cfg: &RunConfig, kind: &StateKind, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let (psi, name) = match *kind {
        StateKind::Basis { j, m, k } => (
            WaveFunction::basis(cfg.hbar, cfg.jmax.max(j), j, m, k)?,
            format!("j{j}m{m}k{k}.json"),
        ),
        StateKind::Random => (random_state(&mut rng(cfg.seed, 100), cfg.hbar, cfg.jmax)?, "random.json".into()),
    };
    write_json(&target(cfg, out, &name), &cfg.hash(), &StateFile::from_state(&psi))
}

/// Schrödinger evolution including the zero-point term.
pub fn state_evolve(cfg: &RunConfig, state: &Path, t: f64, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let psi = load_state(cfg, state)?;
    let prop = Propagator::new(&cfg.inertia_tensor(), cfg.hbar, psi.jmax(), true)?;
    write_json(&target(cfg, out, "evolved.json"), &cfg.hash(), &StateFile::from_state(&prop.evolve(&psi, t)))
}

pub fn wigner_eval(cfg: &RunConfig, state: &Path, euler: [f64; 3], rho: [f64; 3], out: Option<&Path>) -> Result<PathBuf, CliError> {
    let psi = load_state(cfg, state)?;
    let flat = cfg.grids.momentum_flat.unwrap_or(psi.jmax() + 2);
    let r = EulerAngles::new(euler[0], euler[1], euler[2])?.to_rotation();
    let density = psi.evaluate(&r).norm_sqr();
    let w = WignerDistribution::new(psi, cfg.grids.ball)?;
    let v = w.eval(&PhaseSpacePoint::new(r, Vector3::from(rho)))?;
    let marginal = w.momentum_marginal(&r, &MomentumGrid::new(cfg.hbar, flat)?)?;
    write_json(
        &target(cfg, out, "wigner_eval.json"),
        &cfg.hash(),
        &serde_json::json!({
            "euler": euler,
            "rho": rho,
            "value": v.value,
            "imaginary": v.imaginary,
            "momentum_marginal": marginal,
            "density": density,
        }),
    )
}

#[derive(Serialize)]
struct Route {
    observable: String,
    #[serde(flatten)]
    report: ExpectationReport,
    gap: f64,
    bound: f64,
    passed: bool,
}

impl Route {
    fn new(observable: String, report: ExpectationReport, bound: f64) -> Self {
        let c = Check::at_most("", report.gap(), bound);
        Self {
            observable,
            report,
            gap: c.value,
            bound,
            passed: c.passed,
        }
    }
}

/// Phase-space and operator routes for ⟨ρₖ⟩, ⟨ρₖ²⟩ and ⟨H⟩.
pub fn wigner_expect(cfg: &RunConfig, state: &Path, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let psi = load_state(cfg, state)?;
    let inertia = cfg.inertia_tensor();
    let (hbar, tol) = (cfg.hbar, &cfg.tolerances);
    let mut routes = Vec::new();
    for k in 0..3 {
        routes.push(Route::new(format!("rho{}", k + 1), expect_rho(&psi, k)?, tol.moments * hbar));
    }
    for k in 0..3 {
        routes.push(Route::new(format!("rho{}_sq", k + 1), expect_rho2(&psi, k)?, tol.moments * hbar * hbar));
    }
    routes.push(Route::new(
        "H".into(),
        expect_h(&psi, &inertia)?,
        tol.zero_point * inertia.zero_point_energy(hbar),
    ));
    let ok = routes.iter().all(|r| r.passed);
    let path = write_json(&target(cfg, out, "wigner_expect.json"), &cfg.hash(), &serde_json::json!({ "routes": routes }))?;
    fail_unless(ok, "phase-space and operator routes disagree")?;
    Ok(path)
}

pub fn wigner_overlap(cfg: &RunConfig, a: &Path, b: &Path, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let (pa, pb) = (load_state(cfg, a)?, load_state(cfg, b)?);
    let rep = overlap(&pa, &pb, cfg.grids.ball)?;
    let check = Check::at_most("relative", rep.relative(), cfg.tolerances.overlap);
    let path = write_json(
        &target(cfg, out, "wigner_overlap.json"),
        &cfg.hash(),
        &serde_json::json!({ "report": rep, "relative": check.value, "bound": check.bound, "passed": check.passed }),
    )?;
    fail_unless(check.passed, "overlap identity outside tolerance")?;
    Ok(path)
}

pub fn wigner_limit(cfg: &RunConfig, observable: &str, hbars: &[f64], out: Option<&Path>) -> Result<PathBuf, CliError> {
    let obs = match observable {
        "one" => LimitObservable::One,
        "rho1" => LimitObservable::Rho(0),
        "rho2" => LimitObservable::Rho(1),
        "rho3" => LimitObservable::Rho(2),
        "h" => LimitObservable::Hamiltonian(cfg.inertia_tensor()),
        other => return Err(CliError::Usage(format!("unknown observable {other}; use one, rho1, rho2, rho3 or h"))),
    };
    let hbars = if hbars.is_empty() { &cfg.verify.limit_hbars[..] } else { hbars };
    let grid = EulerGrid::for_degree(cfg.grids.euler_degree)?.to_grid();
    let rows = classical_limit_gap(&reference_action_wave(), hbars, 3.0, obs, &grid, &ProjectionOptions::default())?;
    let header = ["hbar", "jmax", "truncation_loss", "f_w", "f_0", "gap", "gap_without_zero_point"];
    let mut csv = CsvArtifact::create(&target(cfg, out, "limit.csv"), &cfg.hash(), &[format!("observable={observable}")], &header)?;
    for r in rows {
        csv.row(&[r.hbar, r.jmax as f64, r.truncation_loss, r.f_w, r.f_0, r.gap, r.gap_without_zero_point.unwrap_or(f64::NAN)])?;
    }
    csv.finish()
}

pub struct ScanArgs {
    pub state: Option<PathBuf>,
    pub gammas: Vec<f64>,
    pub t: f64,
}

/// Liouville residual over shells |γ⃗| = γ for the evolved state.
pub fn coherence_scan_cmd(cfg: &RunConfig, a: &ScanArgs, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let psi = match &a.state {
        Some(p) => load_state(cfg, p)?,
        None => random_state(&mut rng(cfg.seed, 200), cfg.hbar, cfg.jmax)?,
    };
    let inertia = cfg.inertia_tensor();
    let prop = Propagator::new(&inertia, cfg.hbar, psi.jmax(), true)?;
    let at = |t: f64| prop.evolve(&psi, t);
    let mut r = rng(cfg.seed, 201);
    let points: Vec<Rotation> = (0..cfg.verify.coherence_points).map(|_| random_rotation(&mut r)).collect();
    let dirs = sphere_directions(cfg.verify.coherence_directions);
    let rows = coherence_scan(&at, a.t, 1e-2, &inertia, &points, &a.gammas, &dirs)?;
    let threshold = cfg.tolerances.coherence;
    let crossover = match empirical_crossover(&rows, threshold) {
        Some(g) => format!("crossover_gamma={g:.16e}"),
        None => "crossover_gamma=none".into(),
    };
    let comments = vec![format!("threshold={threshold:.16e}"), crossover];
    let mut csv = CsvArtifact::create(
        &target(cfg, out, "coherence_scan.csv"),
        &cfg.hash(),
        &comments,
        &["gamma", "max_abs", "mean_abs", "samples"],
    )?;
    for row in rows {
        csv.row(&[row.gamma, row.max_abs, row.mean_abs, row.samples as f64])?;
    }
    csv.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Angles,
    Momenta,
}

/// n × n slice of f_SU2 and f_SO3 through the centre of the reference
/// packet, over (ν, η) ∈ [0, 2π)² or over (p_ν, p_η) within four momentum
/// widths of the packet's momentum.
pub fn su2_reduce(cfg: &RunConfig, section: Section, n: usize, sigma: f64, out: Option<&Path>) -> Result<PathBuf, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let state = reference_packet(sigma, cfg.hbar)?;
    let opts = ReductionOptions::default();
    let (_, theta, nu, eta) = R4Point::new(state.x0).spherical();
    let h = scale_factors(1.0, theta);
    let frame = spherical_frame(theta, nu, eta);
    let centre: [f64; 3] = std::array::from_fn(|q| h[q + 1] * state.p0.dot(&frame.column(q + 1)));
    let width = 4.0 * cfg.hbar / (2f64.sqrt() * sigma);
    let base = ReducedPoint {
        theta,
        nu,
        eta,
        p_theta: centre[0],
        p_nu: centre[1],
        p_eta: centre[2],
    };
    let mut points = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut q = base;
            match section {
                Section::Angles => {
                    q.nu = TAU * i as f64 / n as f64;
                    q.eta = TAU * j as f64 / n as f64;
                }
                Section::Momenta => {
                    let s = |k: usize| if n == 1 { 0.0 } else { -1.0 + 2.0 * k as f64 / (n - 1) as f64 };
                    q.p_nu = centre[1] + h[2] * width * s(i);
                    q.p_eta = centre[2] + h[3] * width * s(j);
                }
            }
            points.push(q);
        }
    }
    let book = VolumeBookkeeping::default();
    let comments = vec![
        format!("section={}", if section == Section::Angles { "angles" } else { "momenta" }),
        format!("su2_volume={:.16e}", book.su2_volume),
        format!("cover_factor={:.16e}", book.cover_factor),
        format!("measure_ratio={:.16e}", book.measure_ratio),
        format!("periodicity_residual={:.16e}", periodicity_residual(&state, &points, &opts)?),
    ];
    let (a, b) = match section {
        Section::Angles => ("nu", "eta"),
        Section::Momenta => ("p_nu", "p_eta"),
    };
    let header = [a, b, "theta", "phi", "psi", "p_theta", "p_phi", "p_psi", "f_su2", "f_so3"];
    let mut csv = CsvArtifact::create(&target(cfg, out, "su2_section.csv"), &cfg.hash(), &comments, &header)?;
    for q in &points {
        let s = project_to_so3(q);
        let (x, y) = match section {
            Section::Angles => (q.nu, q.eta),
            Section::Momenta => (q.p_nu, q.p_eta),
        };
        csv.row(&[
            x,
            y,
            s.theta,
            s.phi,
            s.psi,
            s.p_theta,
            s.p_phi,
            s.p_psi,
            reduce_to_su2(&state, q, &opts)?,
            f_so3(&state, &s, &opts)?,
        ])?;
    }
    csv.finish()
}

/// Runs the suites, writes `summary.json` and `checks.csv`, and fails when
/// any check fails.
pub fn verify_all(cfg: &RunConfig, only: &[String]) -> Result<Vec<PathBuf>, CliError> {
    for o in only {
        if !verify::SUITES.iter().any(|(n, _)| n == o) {
            let names: Vec<&str> = verify::SUITES.iter().map(|(n, _)| *n).collect();
            return Err(CliError::Usage(format!("unknown suite {o}; known: {}", names.join(", "))));
        }
    }
    let summary = verify::run_suites(cfg, only)?;
    for s in &summary.suites {
        eprintln!("{}", s.line());
    }
    let hash = cfg.hash();
    let json = write_json(&cfg.output_dir.join("summary.json"), &hash, &summary)?;
    let mut csv = CsvArtifact::create(&cfg.output_dir.join("checks.csv"), &hash, &[], &["suite", "check", "passed", "value", "bound"])?;
    for s in &summary.suites {
        for c in &s.checks {
            csv.mixed_row(&[s.suite.clone(), c.name.clone(), c.passed.to_string()], &[c.value, c.bound])?;
        }
    }
    let paths = vec![json, csv.finish()?];
    fail_unless(
        summary.passed == summary.total,
        &format!("{} of {} suites passed", summary.passed, summary.total),
    )?;
    Ok(paths)
}
