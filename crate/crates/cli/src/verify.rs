//! Invariant suites, one per acceptance criterion. `verify all` runs them
//! with the configured sample sizes; the acceptance tests call them directly.

use crate::config::RunConfig;
use crate::states::{random_euler, random_rotation, random_state, reference_action_wave, reference_packet, rng};
use nalgebra::{Vector3, Vector4};
use rand::Rng;
use rotor_core::coherence::{coherence_scan, liouville_residual, sphere_directions};
use rotor_core::distributions::{
    classical_limit_gap, expect_h, expect_rho, expect_rho2, overlap, LimitObservable,
};
use rotor_core::dynamics::{integrate, integrate_geodesic, trajectory_distance, PhaseSpacePoint, Scheme};
use rotor_core::geometry::{
    curvature, geometry_suite, EulerGrid, GammaBall, InertiaTensor, Rotation, SO3_VOLUME,
};
use rotor_core::su2::{
    extended_wigner, so3_total_probability, su2_total_probability, volume_su2, PhaseSpaceRule, ReductionOptions,
    VolumeBookkeeping, SU2_VOLUME,
};
use rotor_core::wavefunction::{ProjectionOptions, Propagator, WaveFunction};
use rotor_core::Result;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value` is finite and at most `bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            passed: value.is_finite() && value <= bound,
        }
    }

    /// Passes when `value` is finite and strictly above `bound`.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            passed: value.is_finite() && value > bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub total: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        Self {
            suite: suite.into(),
            passed: checks.iter().filter(|c| c.passed).count(),
            total: checks.len(),
            checks,
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    /// `PASS name: check=value (bound b); ...` on one line.
    pub fn line(&self) -> String {
        let parts: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{}={:.3e} (bound {:.1e}{})", c.name, c.value, c.bound, if c.passed { "" } else { ", FAILED" }))
            .collect();
        format!("{} {}: {}", if self.ok() { "PASS" } else { "FAIL" }, self.suite, parts.join("; "))
    }
}

pub type Suite = fn(&RunConfig) -> Result<SuiteReport>;

/// Every suite in criterion order.
pub const SUITES: [(&str, Suite); 11] = [
    ("curvature", curvature_suite),
    ("geometry", geometry_check_suite),
    ("dynamics", dynamics_suite),
    ("haar", haar_suite),
    ("quantization", quantization_suite),
    ("momentum_shift", momentum_shift_suite),
    ("zero_point", zero_point_suite),
    ("overlap", overlap_suite),
    ("classical_limit", classical_limit_suite),
    ("coherence", coherence_suite),
    ("su2", su2_suite),
];

pub fn curvature_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let c = curvature(&InertiaTensor::spherical(1.0)?)?;
    Ok(SuiteReport::new(
        "curvature",
        vec![Check::at_most("abs(R - 3/2)", (c.scalar - 1.5).abs(), cfg.tolerances.curvature)],
    ))
}

pub fn geometry_check_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed, 1);
    let points: Vec<_> = (0..cfg.verify.geometry_points).map(|_| random_euler(&mut r)).collect();
    let rep = geometry_suite(&points)?;
    let tol = cfg.tolerances.geometry;
    Ok(SuiteReport::new(
        "geometry",
        vec![
            Check::at_most("structure_equations", rep.structure, tol),
            Check::at_most("duality", rep.duality, tol),
            Check::at_most("commutators", rep.commutator, tol),
        ],
    ))
}

/// ρ(0) = (1, 0.5, 0.2) from a fixed orientation, t ∈ [0, 10], dt = 1e−3.
pub fn dynamics_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let inertia = cfg.inertia_tensor();
    let r0 = Rotation::exp(&Vector3::new(0.3, -0.4, 0.8));
    let rho0 = Vector3::new(1.0, 0.5, 0.2);
    let ham = integrate(&PhaseSpacePoint::new(r0, rho0), &inertia, 10.0, 1e-3, Scheme::Rk4)?;
    let omega0 = rho0.component_div(&inertia.as_vector());
    let geo = integrate_geodesic(&r0, &omega0, &inertia, 10.0, 1e-3)?;
    let (dh, dc) = ham.conservation_drift(&inertia);
    let tol = &cfg.tolerances;
    Ok(SuiteReport::new(
        "dynamics",
        vec![
            Check::at_most("hamiltonian_vs_geodesic", trajectory_distance(&ham, &geo), tol.trajectory),
            Check::at_most("energy_drift", dh, tol.drift),
            Check::at_most("casimir_drift", dc, tol.drift),
        ],
    ))
}

pub fn haar_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let ball = GammaBall::new(cfg.grids.ball)?.to_grid().volume();
    let euler = EulerGrid::for_degree(cfg.grids.euler_degree)?.to_grid().volume();
    let tol = cfg.tolerances.haar;
    Ok(SuiteReport::new(
        "haar",
        vec![
            Check::at_most("abs(ball - 8 pi^2)", (ball - SO3_VOLUME).abs(), tol),
            Check::at_most("abs(ball - euler)", (ball - euler).abs(), tol),
        ],
    ))
}

/// Every basis state |j m k⟩ with j ≤ basis_jmax.
pub fn quantization_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let hbar = cfg.hbar;
    let jmax = cfg.verify.basis_jmax;
    let (mut vs_k, mut vs_op, mut count) = (0.0f64, 0.0f64, 0usize);
    for j in 0..=jmax {
        let ji = j as i64;
        for m in -ji..=ji {
            for k in -ji..=ji {
                let rep = expect_rho(&WaveFunction::basis(hbar, jmax, j, m, k)?, 2)?;
                vs_k = vs_k.max((rep.quadrature - hbar * k as f64).abs());
                vs_op = vs_op.max(rep.gap());
                count += 1;
            }
        }
    }
    let bound = cfg.tolerances.moments * hbar;
    Ok(SuiteReport::new(
        "quantization",
        vec![
            Check::at_most(format!("max abs(<rho3> - hbar k) over {count} states"), vs_k, bound),
            Check::at_most("max abs(quadrature - operator)", vs_op, bound),
        ],
    ))
}

pub fn momentum_shift_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let hbar = cfg.hbar;
    let mut r = rng(cfg.seed, 6);
    let mut worst = 0.0f64;
    for _ in 0..cfg.verify.random_states {
        let psi = random_state(&mut r, hbar, cfg.jmax)?;
        for k in 0..3 {
            worst = worst.max((expect_rho2(&psi, k)?.shift() - hbar * hbar / 6.0).abs());
        }
    }
    Ok(SuiteReport::new(
        "momentum_shift",
        vec![Check::at_most(
            format!("max abs(shift - hbar^2/6) over {} states", cfg.verify.random_states),
            worst,
            cfg.tolerances.moments * hbar * hbar,
        )],
    ))
}

/// Spherical top with I = I₁ and an asymmetric top (the configured one,
/// or (1, 2, 3) when the configured tensor is spherical).
pub fn zero_point_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let hbar = cfg.hbar;
    let configured = cfg.inertia_tensor();
    let asym = if configured.is_spherical() { InertiaTensor::new(1.0, 2.0, 3.0)? } else { configured };
    let tops = [("spherical", InertiaTensor::spherical(cfg.inertia[0])?), ("asymmetric", asym)];
    let mut checks = Vec::new();
    for (label, inertia) in tops {
        let mut r = rng(cfg.seed, 7);
        let eps0 = inertia.zero_point_energy(hbar);
        let mut worst = 0.0f64;
        for _ in 0..cfg.verify.random_states {
            let psi = random_state(&mut r, hbar, cfg.jmax)?;
            worst = worst.max((expect_h(&psi, &inertia)?.shift() - eps0).abs() / eps0);
        }
        checks.push(Check::at_most(format!("{label} rel(shift - eps0)"), worst, cfg.tolerances.zero_point));
    }
    Ok(SuiteReport::new("zero_point", checks))
}

pub fn overlap_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed, 8);
    let mut worst = 0.0f64;
    for _ in 0..cfg.verify.overlap_pairs {
        let a = random_state(&mut r, cfg.hbar, cfg.jmax)?;
        let b = random_state(&mut r, cfg.hbar, cfg.jmax)?;
        worst = worst.max(overlap(&a, &b, cfg.grids.ball)?.relative());
    }
    Ok(SuiteReport::new(
        "overlap",
        vec![Check::at_most(
            format!("max relative gap over {} pairs", cfg.verify.overlap_pairs),
            worst,
            cfg.tolerances.overlap,
        )],
    ))
}

/// |⟨ρ₃⟩_{f_W} − ⟨ρ₃⟩_{f₀}| along the configured ħ sequence; the value is
/// the largest ratio of consecutive gaps, which must stay below 1.
pub fn classical_limit_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let grid = EulerGrid::for_degree(cfg.grids.euler_degree)?.to_grid();
    let rows = classical_limit_gap(
        &reference_action_wave(),
        &cfg.verify.limit_hbars,
        3.0,
        LimitObservable::Rho(2),
        &grid,
        &ProjectionOptions::default(),
    )?;
    let ratio = rows.windows(2).map(|w| w[1].gap / w[0].gap).fold(0.0, f64::max);
    let ratio = if rows.len() < 2 { f64::NAN } else { ratio };
    Ok(SuiteReport::new(
        "classical_limit",
        vec![Check::above("1 - max consecutive gap ratio", 1.0 - ratio, 0.0)],
    ))
}

/// Spherical top I = 1. The first check is the sup of |residual| over
/// |γ| ≤ 0.1 for evolved random states; the second is the spread of
/// (excess residual)/defect over defects 0.05, 0.1, 0.2, which is zero
/// for linear growth; the third requires that excess to be nonzero.
pub fn coherence_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let inertia = InertiaTensor::spherical(1.0)?;
    let hbar = cfg.hbar;
    let mut r = rng(cfg.seed, 10);
    let points: Vec<Rotation> = (0..cfg.verify.coherence_points).map(|_| random_rotation(&mut r)).collect();
    let directions = sphere_directions(cfg.verify.coherence_directions);
    let gammas = [0.025, 0.05, 0.075, 0.1];
    let mut sup = 0.0f64;
    let mut states = Vec::new();
    for _ in 0..cfg.verify.coherence_states {
        let psi = random_state(&mut r, hbar, cfg.jmax)?;
        let prop = Propagator::new(&inertia, hbar, cfg.jmax, true)?;
        let at = |t: f64| prop.evolve(&psi, t);
        for row in coherence_scan(&at, 0.3, 1e-2, &inertia, &points, &gammas, &directions)? {
            sup = sup.max(row.max_abs);
        }
        states.push(psi);
    }

    let psi = states.first().cloned().unwrap_or(random_state(&mut r, hbar, cfg.jmax)?);
    let (q, g) = (points.first().copied().unwrap_or_else(Rotation::identity), Vector3::new(0.03, -0.02, 0.04));
    let residual = |defect: f64| -> Result<num_complex::Complex64> {
        let wrong = InertiaTensor::spherical(1.0 / (1.0 + defect))?;
        let prop = Propagator::new(&wrong, hbar, psi.jmax(), true)?;
        let at = |t: f64| prop.evolve(&psi, t);
        liouville_residual(&at, 0.0, 1e-2, &inertia, &q, &g)
    };
    let base = residual(0.0)?;
    let mut slopes = Vec::new();
    for d in [0.05, 0.1, 0.2] {
        slopes.push((residual(d)? - base).norm() / d);
    }
    let spread = slopes.iter().map(|s| (s / slopes[0] - 1.0).abs()).fold(0.0, f64::max);
    Ok(SuiteReport::new(
        "coherence",
        vec![
            Check::at_most("sup abs(residual) for abs(gamma) <= 0.1", sup, cfg.tolerances.coherence),
            Check::at_most("defect slope spread", spread, 1e-6),
            Check::above("defect slope", slopes[0], 1e-6),
        ],
    ))
}

/// Packet with σ = 0.08, ħ = 0.1 centred on the unit sphere.
pub fn su2_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let tol = &cfg.tolerances;
    let state = reference_packet(0.08, 0.1)?;
    let mut r = rng(cfg.seed, 11);
    let mut wigner = 0.0f64;
    for _ in 0..4 {
        let dx = Vector4::from_fn(|_, _| r.gen_range(-0.1..0.1));
        let dp = Vector4::from_fn(|_, _| r.gen_range(-0.5..0.5));
        let (x, p) = (state.x0 + dx, state.p0 + dp);
        wigner = wigner.max((extended_wigner(&state, &x, &p, 20)? - state.wigner_closed_form(&x, &p)).abs());
    }
    let opts = ReductionOptions::default();
    let rule = PhaseSpaceRule {
        angular_nodes: cfg.verify.su2_angular_nodes,
        momentum_nodes: cfg.verify.su2_momentum_nodes,
        ..Default::default()
    };
    let su2 = su2_total_probability(&state, &opts, &rule)?;
    let so3 = so3_total_probability(&state, &opts, &rule)?;
    let book = VolumeBookkeeping::default();
    Ok(SuiteReport::new(
        "su2",
        vec![
            Check::at_most("abs(V_SU2 - 2 pi^2)", (volume_su2(24)? - SU2_VOLUME).abs(), tol.su2_volume),
            Check::at_most("abs(8 pi^2 - bookkeeping volume)", (book.so3_volume() - SO3_VOLUME).abs(), tol.su2_volume),
            Check::at_most("extended Wigner vs closed form", wigner, tol.su2_wigner),
            Check::at_most("abs(1 - total f_SU2)", (su2 - 1.0).abs(), tol.su2_normalization),
            Check::at_most("abs(1 - total f_SO3)", (so3 - 1.0).abs(), tol.su2_normalization),
        ],
    ))
}


#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub total: usize,
    pub suites: Vec<SuiteReport>,
}

/// Runs the named suites, or all of them when `only` is empty.
pub fn run_suites(cfg: &RunConfig, only: &[String]) -> Result<Summary> {
    let mut suites = Vec::new();
    for (name, suite) in SUITES {
        if only.is_empty() || only.iter().any(|o| o == name) {
            suites.push(suite(cfg)?);
        }
    }
    Ok(Summary {
        passed: suites.iter().filter(|s| s.ok()).count(),
        total: suites.len(),
        suites,
    })
}
