//! Random inputs shared by the unit tests.

use crate::geometry::Rotation;
use crate::wavefunction::WaveFunction;
use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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

/// Normalized state with Gaussian random coefficients up to `jmax`.
pub fn random_state(hbar: f64, jmax: usize, seed: u64) -> WaveFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut psi = WaveFunction::zero(hbar, jmax).unwrap();
    for j in 0..=jmax {
        let ji = j as i64;
        for m in -ji..=ji {
            for k in -ji..=ji {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                psi.set(j, m, k, c).unwrap();
            }
        }
    }
    psi.normalized().unwrap()
}
