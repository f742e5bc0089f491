use crate::error::{Error, Result};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Principal moments of inertia (I₁, I₂, I₃), all strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct InertiaTensor([f64; 3]);

impl InertiaTensor {
    pub fn new(i1: f64, i2: f64, i3: f64) -> Result<Self> {
        let v = [i1, i2, i3];
        if v.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(Self(v))
        } else {
            Err(Error::InvalidInertia(v))
        }
    }

    pub fn spherical(i: f64) -> Result<Self> {
        Self::new(i, i, i)
    }

    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::from(self.0)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_spherical(&self) -> bool {
        self.0[0] == self.0[1] && self.0[1] == self.0[2]
    }

    /// Σₖ ħ²/12Iₖ.
    pub fn zero_point_energy(&self, hbar: f64) -> f64 {
        self.0.iter().map(|i| hbar * hbar / (12.0 * i)).sum()
    }

    /// H = Σ ρₖ²/2Iₖ.
    pub fn kinetic_energy(&self, rho: &Vector3<f64>) -> f64 {
        (0..3).map(|k| rho[k] * rho[k] / (2.0 * self.0[k])).sum()
    }

    /// ω′ₖ = ρₖ/Iₖ.
    pub fn angular_velocity(&self, rho: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(rho[0] / self.0[0], rho[1] / self.0[1], rho[2] / self.0[2])
    }
}

impl TryFrom<[f64; 3]> for InertiaTensor {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<InertiaTensor> for [f64; 3] {
    fn from(i: InertiaTensor) -> Self {
        i.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_moments() {
        assert!(InertiaTensor::new(1.0, 0.0, 2.0).is_err());
        assert!(InertiaTensor::new(1.0, f64::NAN, 2.0).is_err());
        assert!(serde_json::from_str::<InertiaTensor>("[1.0, -2.0, 3.0]").is_err());
    }

    #[test]
    fn zero_point_energy_of_spherical_top() {
        let i = InertiaTensor::spherical(2.0).unwrap();
        assert!((i.zero_point_energy(1.0) - 1.0 / 8.0).abs() < 1e-15);
    }
}
