//! Classical rigid-body motion on T*SO(3): Euler equations, geodesic flow and
//! the Poisson bracket.

use crate::error::{Error, Result};
use crate::fd::FiniteDifference;
use crate::geometry::charts::{rotation_to_euler, EulerAngles};
use crate::geometry::curvature::levi_civita_connection;
use crate::geometry::generators::right_derivative;
use crate::geometry::{hat, InertiaTensor, Rotation};
use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

/// Largest accepted value of |ρ| dt / min(I).
pub const MAX_STEP_RATIO: f64 = 0.5;

/// A point (𝓡, ρ⃗) of T*SO(3) with intrinsic angular momentum ρ⃗.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpacePoint {
    pub r: Rotation,
    pub rho: Vector3<f64>,
}

impl PhaseSpacePoint {
    pub fn new(r: Rotation, rho: Vector3<f64>) -> Self {
        Self { r, rho }
    }

    /// Laboratory components lᵢ = Σₖ 𝓡ᵢₖ ρₖ.
    pub fn lab_momentum(&self) -> Vector3<f64> {
        self.r.matrix() * self.rho
    }

    pub fn energy(&self, inertia: &InertiaTensor) -> f64 {
        inertia.kinetic_energy(&self.rho)
    }

    pub fn euler_angles(&self) -> EulerAngles {
        rotation_to_euler(&self.r)
    }
}

/// Right-hand side of the Euler equations: (ω′, ρ̇) with ω′ₖ = ρₖ/Iₖ and ρ̇ = ρ × ω′.
pub fn euler_rhs(p: &PhaseSpacePoint, inertia: &InertiaTensor) -> (Vector3<f64>, Vector3<f64>) {
    let omega = inertia.angular_velocity(&p.rho);
    (omega, p.rho.cross(&omega))
}

/// ω̇′ᵢ = −Σⱼₖ Γⁱⱼₖ ω′ⱼ ω′ₖ with the Levi-Civita connection of B in the Zₖ
/// frame. The metric is left-invariant, so the result does not depend on the
/// orientation.
pub fn geodesic_rhs(_at: &EulerAngles, omega: &Vector3<f64>, inertia: &InertiaTensor) -> Vector3<f64> {
    let gamma = levi_civita_connection(inertia);
    Vector3::from_fn(|i, _| {
        let mut acc = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                acc -= gamma[i][j][k] * omega[j] * omega[k];
            }
        }
        acc
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Rk4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<(f64, PhaseSpacePoint)>,
}

impl Trajectory {
    pub fn last(&self) -> &PhaseSpacePoint {
        &self.samples.last().expect("trajectory is never empty").1
    }

    /// Largest relative change of H and |ρ|² with respect to the initial point.
    pub fn conservation_drift(&self, inertia: &InertiaTensor) -> (f64, f64) {
        let p0 = &self.samples[0].1;
        let (h0, c0) = (p0.energy(inertia), p0.rho.norm_squared());
        self.samples.iter().fold((0.0_f64, 0.0_f64), |(dh, dc), (_, p)| {
            (
                dh.max((p.energy(inertia) - h0).abs() / h0.abs().max(f64::MIN_POSITIVE)),
                dc.max((p.rho.norm_squared() - c0).abs() / c0.max(f64::MIN_POSITIVE)),
            )
        })
    }
}

fn check_step(rho_norm: f64, dt: f64, t_end: f64, inertia: &InertiaTensor) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidResolution(format!("time step must be positive, got {dt}")));
    }
    if !(t_end >= 0.0) {
        return Err(Error::InvalidResolution(format!("end time must be non-negative, got {t_end}")));
    }
    let ratio = rho_norm * dt / inertia.min();
    if ratio > MAX_STEP_RATIO {
        return Err(Error::StepTooLarge { ratio });
    }
    Ok((t_end / dt - 1e-9).ceil().max(0.0) as usize)
}

/// Fixed-step integration of a first-order system on (matrix, vector) pairs,
/// with the matrix projected back onto SO(3) after every step.
fn rk4_flow(
    r0: Rotation,
    v0: Vector3<f64>,
    t_end: f64,
    dt: f64,
    steps: usize,
    rhs: impl Fn(&Matrix3<f64>, &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>),
) -> Vec<(f64, Rotation, Vector3<f64>)> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, r0, v0));
    let (mut r, mut v) = (*r0.matrix(), v0);
    let mut t = 0.0;
    for n in 1..=steps {
        let h = (t_end - t).min(dt);
        let (k1r, k1v) = rhs(&r, &v);
        let (k2r, k2v) = rhs(&(r + k1r * (0.5 * h)), &(v + k1v * (0.5 * h)));
        let (k3r, k3v) = rhs(&(r + k2r * (0.5 * h)), &(v + k2v * (0.5 * h)));
        let (k4r, k4v) = rhs(&(r + k3r * h), &(v + k3v * h));
        r += (k1r + k2r * 2.0 + k3r * 2.0 + k4r) * (h / 6.0);
        v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        let proj = Rotation::nearest(&r);
        r = *proj.matrix();
        t = if n == steps { t_end } else { n as f64 * dt };
        out.push((t, proj, v));
    }
    out
}

/// Hamiltonian flow: 𝓡̇ = 𝓡 Σ ω′ᵢξᵢ together with the Euler equations.
pub fn integrate(
    p0: &PhaseSpacePoint,
    inertia: &InertiaTensor,
    t_end: f64,
    dt: f64,
    _scheme: Scheme,
) -> Result<Trajectory> {
    let steps = check_step(p0.rho.norm(), dt, t_end, inertia)?;
    let samples = rk4_flow(p0.r, p0.rho, t_end, dt, steps, |r, rho| {
        let omega = inertia.angular_velocity(rho);
        (r * hat(&omega), rho.cross(&omega))
    });
    Ok(Trajectory {
        dt,
        samples: samples
            .into_iter()
            .map(|(t, r, rho)| (t, PhaseSpacePoint { r, rho }))
            .collect(),
    })
}

/// Geodesic flow of B in the variables (𝓡, ω′), reported as (𝓡, ρ = Iω′).
pub fn integrate_geodesic(
    r0: &Rotation,
    omega0: &Vector3<f64>,
    inertia: &InertiaTensor,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    let iv = inertia.as_vector();
    let rho0 = omega0.component_mul(&iv);
    let steps = check_step(rho0.norm(), dt, t_end, inertia)?;
    let chart = EulerAngles {
        phi: 0.0,
        theta: 0.0,
        psi: 0.0,
    };
    let samples = rk4_flow(*r0, *omega0, t_end, dt, steps, |r, omega| {
        (r * hat(omega), geodesic_rhs(&chart, omega, inertia))
    });
    Ok(Trajectory {
        dt,
        samples: samples
            .into_iter()
            .map(|(t, r, omega)| {
                (
                    t,
                    PhaseSpacePoint {
                        r,
                        rho: omega.component_mul(&iv),
                    },
                )
            })
            .collect(),
    })
}

/// Largest entrywise difference between two trajectories sampled at the same times.
pub fn trajectory_distance(a: &Trajectory, b: &Trajectory) -> f64 {
    a.samples
        .iter()
        .zip(&b.samples)
        .map(|((_, p), (_, q))| (p.rho - q.rho).amax().max((p.r.matrix() - q.r.matrix()).amax()))
        .fold(0.0, f64::max)
}

/// Momentum step used for ∂/∂ρₖ: 1e−5·max(1, |ρ|).
pub fn momentum_step(rho: &Vector3<f64>) -> f64 {
    1e-5 * rho.norm().max(1.0)
}

/// {f, g} = Σₖ (Zₖf ∂_{ρₖ}g − Zₖg ∂_{ρₖ}f) − ρ⃗·(∂⃗_ρ f × ∂⃗_ρ g), with Zₖ and ∂_ρ
/// by central differences.
pub fn poisson_bracket(
    f: impl Fn(&Rotation, &Vector3<f64>) -> f64,
    g: impl Fn(&Rotation, &Vector3<f64>) -> f64,
    p: &PhaseSpacePoint,
) -> f64 {
    let fd_r = FiniteDifference::default();
    let fd_rho = FiniteDifference::central(momentum_step(&p.rho));
    let grad_rho = |h: &dyn Fn(&Rotation, &Vector3<f64>) -> f64| {
        Vector3::from_fn(|k, _| {
            fd_rho.derivative(|s| {
                let mut rho = p.rho;
                rho[k] += s;
                h(&p.r, &rho)
            })
        })
    };
    let grad_z = |h: &dyn Fn(&Rotation, &Vector3<f64>) -> f64| {
        Vector3::from_fn(|k, _| right_derivative(|q: &Rotation| h(q, &p.rho), k, &p.r, &fd_r))
    };
    let (df, dg) = (grad_rho(&f), grad_rho(&g));
    let (zf, zg) = (grad_z(&f), grad_z(&g));
    zf.dot(&dg) - zg.dot(&df) - p.rho.dot(&df.cross(&dg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotation::levi_civita;
    use proptest::prelude::*;

    fn inertia(a: f64, b: f64, c: f64) -> InertiaTensor {
        InertiaTensor::new(a, b, c).unwrap()
    }

    #[test]
    fn spherical_top_keeps_momentum_and_rotates_uniformly() {
        let i = InertiaTensor::spherical(2.0).unwrap();
        let rho = Vector3::new(0.3, -0.4, 1.0);
        let r0 = Rotation::exp(&Vector3::new(0.2, 0.1, -0.5));
        let p = PhaseSpacePoint::new(r0, rho);
        assert_eq!(euler_rhs(&p, &i).1, Vector3::zeros());
        let traj = integrate(&p, &i, 3.0, 1e-2, Scheme::Rk4).unwrap();
        let exact = r0 * Rotation::exp(&(rho * (3.0 / 2.0)));
        assert!((traj.last().rho - rho).norm() < 1e-14);
        assert!(traj.last().r.distance(&exact) < 1e-10);
    }

    #[test]
    fn principal_axis_rotation_is_stationary() {
        let p = PhaseSpacePoint::new(Rotation::identity(), Vector3::new(0.0, 0.0, 2.0));
        assert_eq!(euler_rhs(&p, &inertia(1.0, 2.0, 3.0)).1, Vector3::zeros());
    }

    #[test]
    fn symmetric_top_precesses_at_the_closed_form_rate() {
        let i = inertia(1.5, 1.5, 0.5);
        let rho0 = Vector3::new(0.8, -0.3, 1.2);
        let omega = rho0.z * (1.0 / 0.5 - 1.0 / 1.5);
        let t = 4.0;
        let traj = integrate(&PhaseSpacePoint::new(Rotation::identity(), rho0), &i, t, 1e-3, Scheme::Rk4).unwrap();
        let (s, c) = (omega * t).sin_cos();
        let expect = Vector3::new(rho0.x * c + rho0.y * s, -rho0.x * s + rho0.y * c, rho0.z);
        assert!((traj.last().rho - expect).norm() < 1e-10);
    }

    #[test]
    fn zero_duration_returns_initial_point() {
        let p = PhaseSpacePoint::new(Rotation::identity(), Vector3::new(1.0, 0.0, 0.0));
        let traj = integrate(&p, &inertia(1.0, 2.0, 3.0), 0.0, 0.1, Scheme::Rk4).unwrap();
        assert_eq!(traj.samples, vec![(0.0, p)]);
    }

    #[test]
    fn large_steps_are_rejected() {
        let p = PhaseSpacePoint::new(Rotation::identity(), Vector3::new(10.0, 0.0, 0.0));
        assert!(matches!(
            integrate(&p, &inertia(1.0, 2.0, 3.0), 1.0, 0.1, Scheme::Rk4),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn asymmetric_top_conserves_energy_and_casimir() {
        let i = inertia(1.0, 2.0, 3.0);
        let p = PhaseSpacePoint::new(Rotation::identity(), Vector3::new(1.0, 0.5, 0.2));
        let traj = integrate(&p, &i, 10.0, 1e-3, Scheme::Rk4).unwrap();
        assert_eq!(traj.samples.len(), 10_001);
        let (dh, dc) = traj.conservation_drift(&i);
        assert!(dh < 1e-9 && dc < 1e-9, "{dh} {dc}");
        for (_, q) in &traj.samples {
            assert!(q.r.orthogonality_defect() < 1e-12);
        }
    }

    #[test]
    fn geodesic_rhs_matches_legendre_mapped_euler_rhs() {
        let i = inertia(1.0, 2.0, 3.0);
        let w = Vector3::new(1.0, 1.0, 1.0);
        let rho = w.component_mul(&i.as_vector());
        let p = PhaseSpacePoint::new(Rotation::identity(), rho);
        let expect = euler_rhs(&p, &i).1.component_div(&i.as_vector());
        assert!((expect - Vector3::new(-1.0, 1.0, -1.0 / 3.0)).norm() < 1e-15);
        let e = EulerAngles { phi: 0.1, theta: 0.2, psi: 0.3 };
        assert!((geodesic_rhs(&e, &w, &i) - expect).norm() < 1e-15);
        assert_eq!(geodesic_rhs(&e, &w, &InertiaTensor::spherical(1.0).unwrap()), Vector3::zeros());
    }

    #[test]
    fn geodesic_and_hamiltonian_flows_coincide() {
        let i = inertia(1.0, 2.0, 3.0);
        let r0 = Rotation::exp(&Vector3::new(0.3, -0.2, 0.9));
        let rho = Vector3::new(1.0, 0.5, 0.2);
        let h = integrate(&PhaseSpacePoint::new(r0, rho), &i, 10.0, 1e-3, Scheme::Rk4).unwrap();
        let g = integrate_geodesic(&r0, &i.angular_velocity(&rho), &i, 10.0, 1e-3).unwrap();
        assert!(trajectory_distance(&h, &g) < 1e-8);
    }

    fn lab(k: usize) -> impl Fn(&Rotation, &Vector3<f64>) -> f64 {
        move |r, rho| (r.matrix() * rho)[k]
    }

    #[test]
    fn bracket_structure_constants() {
        let p = PhaseSpacePoint::new(Rotation::exp(&Vector3::new(0.4, 1.0, -0.3)), Vector3::new(0.7, -1.1, 0.4));
        let l = p.lab_momentum();
        for i in 0..3 {
            for j in 0..3 {
                let body = poisson_bracket(|_, r| r[i], |_, r| r[j], &p);
                let labb = poisson_bracket(lab(i), lab(j), &p);
                let (mut eb, mut el) = (0.0, 0.0);
                for k in 0..3 {
                    eb -= levi_civita(i, j, k) * p.rho[k];
                    el += levi_civita(i, j, k) * l[k];
                }
                assert!((body - eb).abs() < 1e-8, "{i}{j}: {body} vs {eb}");
                assert!((labb - el).abs() < 1e-8, "{i}{j}: {labb} vs {el}");
            }
        }
    }

    #[test]
    fn equations_of_motion_follow_from_the_bracket() {
        let i = inertia(1.0, 2.0, 3.0);
        let p = PhaseSpacePoint::new(Rotation::exp(&Vector3::new(0.2, 0.3, 0.1)), Vector3::new(1.0, 0.5, 0.2));
        let dt = 1e-3;
        let traj = integrate(&p, &i, 2.0 * dt, dt, Scheme::Rk4).unwrap();
        let rate = (traj.samples[2].1.rho - traj.samples[0].1.rho) / (2.0 * dt);
        let mid = traj.samples[1].1;
        for k in 0..3 {
            let b = poisson_bracket(|_, r| r[k], |_, r| i.kinetic_energy(r), &mid);
            assert!((rate[k] - b).abs() < 1e-6 * rate.norm().max(1.0), "{k}: {} vs {b}", rate[k]);
        }
    }

    fn field(c: [f64; 4]) -> impl Fn(&Rotation, &Vector3<f64>) -> f64 {
        move |r, rho| {
            let m = r.matrix();
            c[0] * m[(0, 1)] * rho.x + c[1] * (m[(2, 2)] + rho.y * rho.z).sin() + c[2] * rho.norm_squared()
                + c[3] * m[(1, 0)] * rho.z
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn bracket_is_antisymmetric_bilinear_and_leibniz(
            a in prop::array::uniform4(-1.0..1.0f64),
            b in prop::array::uniform4(-1.0..1.0f64),
            c in prop::array::uniform4(-1.0..1.0f64),
            v in prop::array::uniform3(-1.0..1.0f64),
            w in prop::array::uniform3(-1.5..1.5f64),
        ) {
            let p = PhaseSpacePoint::new(Rotation::exp(&Vector3::from(v)), Vector3::from(w));
            let (f, g, h) = (field(a), field(b), field(c));
            prop_assert!(poisson_bracket(&f, &f, &p).abs() < 1e-5);
            let fg = poisson_bracket(&f, &g, &p);
            prop_assert!((fg + poisson_bracket(&g, &f, &p)).abs() < 1e-5);
            let sum = |r: &Rotation, x: &Vector3<f64>| 2.0 * g(r, x) - 0.5 * h(r, x);
            let lin = poisson_bracket(&f, sum, &p) - 2.0 * fg + 0.5 * poisson_bracket(&f, &h, &p);
            prop_assert!(lin.abs() < 1e-5);
            let prod = |r: &Rotation, x: &Vector3<f64>| g(r, x) * h(r, x);
            let leib = poisson_bracket(&f, prod, &p)
                - fg * h(&p.r, &p.rho)
                - g(&p.r, &p.rho) * poisson_bracket(&f, &h, &p);
            prop_assert!(leib.abs() < 1e-5);
        }
    }
}
