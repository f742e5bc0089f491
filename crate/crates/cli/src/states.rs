//! Seeded random inputs and the fixed reference objects used by the suites.

use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotor_core::distributions::ActionWave;
use rotor_core::geometry::{EulerAngles, Rotation, ScalarField, SO3_VOLUME};
use rotor_core::su2::{ExtendedState, R4Point};
use rotor_core::wavefunction::WaveFunction;
use rotor_core::Result;

/// Stream `stream` of the run seed; every suite draws from its own stream.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Haar-distributed rotation from a uniformly random unit quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> Rotation {
    let q: [f64; 4] = loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            break v.map(|x| x / n);
        }
    };
    let (w, v) = (q[0], Vector3::new(q[1], q[2], q[3]));
    let angle = 2.0 * w.clamp(-1.0, 1.0).acos();
    let axis = if v.norm() > 1e-12 { v / v.norm() } else { Vector3::z() };
    Rotation::exp(&(axis * angle))
}

/// Chart points with cos θ uniform in [−0.98, 0.98], clear of the chart poles.
pub fn random_euler(rng: &mut impl Rng) -> EulerAngles {
    let tau = std::f64::consts::TAU;
    let c: f64 = rng.gen_range(-0.98..0.98);
    EulerAngles::new(rng.gen_range(0.0..tau), c.acos(), rng.gen_range(0.0..tau)).expect("theta lies in (0, pi)")
}

/// Normalized state with uniform random coefficients in [−1, 1]² up to `jmax`.
pub fn random_state(rng: &mut impl Rng, hbar: f64, jmax: usize) -> Result<WaveFunction> {
    let mut psi = WaveFunction::zero(hbar, jmax)?;
    for j in 0..=jmax {
        let ji = j as i64;
        for m in -ji..=ji {
            for k in -ji..=ji {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                psi.set(j, m, k, c)?;
            }
        }
    }
    psi.normalized()
}

/// n = (1 + 0.9 𝓡₃₂)/8π², S = 0.8 𝓡₃₃ + 0.6 𝓡₃₁.
pub fn reference_action_wave() -> ActionWave {
    let n = ScalarField::from_euler(|_, t, q| (1.0 + 0.9 * t.sin() * q.cos()) / SO3_VOLUME);
    let s = ScalarField::from_euler(|_, t, q| 0.8 * t.cos() + 0.6 * t.sin() * q.sin())
        .with_gradient(|_, t, q| [0.0, -0.8 * t.sin() + 0.6 * t.cos() * q.sin(), 0.6 * t.sin() * q.cos()]);
    ActionWave::new(n, s)
}

/// Gaussian packet on the unit sphere of ℝ⁴, away from the chart poles.
pub fn reference_packet(sigma: f64, hbar: f64) -> Result<ExtendedState> {
    let x0 = R4Point::from_spherical(1.0, std::f64::consts::FRAC_PI_2, 0.7, 2.1).x;
    ExtendedState::gaussian(x0, Vector4::new(0.3, -0.2, 0.5, 0.1), sigma, hbar)
}
