//! Momentum lattice ρ⃗ = ħn⃗ with a separable taper.
//!
//! The lattice spacing ħ is reciprocal to the 2π period of the γ-cube
//! that contains the ball γ ≤ π. The taper keeps weight 1 for |nᵢ| ≤ N and
//! falls to zero at |nᵢ| = 2N in each direction, either linearly
//! (de la Vallée-Poussin) or along a C^∞ step. Sums over the
//! lattice can therefore be exchanged with the γ-integral of f_W, which
//! turns them into a convolution with the separable kernel
//! V(γ⃗) = Πᵢ Σₙ w(n) e^{−iγᵢn}.

use crate::error::{Error, Result};
use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    /// Linear fall-off. The kernel tails decay like 1/(Nγᵢ²).
    ValleePoussin,
    /// C^∞ fall-off. The kernel tails decay faster than any power of Nγᵢ.
    #[default]
    Smooth,
}

/// e^{−1/x} / (e^{−1/x} + e^{−1/(1−x)}), rising from 0 at x ≤ 0 to 1 at x ≥ 1.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let (a, b) = ((-1.0 / x).exp(), (-1.0 / (1.0 - x)).exp());
    a / (a + b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    pub hbar: f64,
    /// Half-width N of the flat part of the taper, in lattice units.
    pub flat: usize,
    pub taper: Taper,
}

impl MomentumGrid {
    pub fn new(hbar: f64, flat: usize) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if flat == 0 {
            return Err(Error::InvalidResolution("momentum grid needs flat >= 1".into()));
        }
        Ok(Self {
            hbar,
            flat,
            taper: Taper::default(),
        })
    }

    pub fn with_taper(mut self, taper: Taper) -> Self {
        self.taper = taper;
        self
    }

    /// Default extent ρ_max = ħ(jmax + 2).
    pub fn for_band_limit(hbar: f64, jmax: usize) -> Result<Self> {
        Self::new(hbar, jmax + 2)
    }

    /// Radius of the flat region, ρ_max = ħN.
    pub fn extent(&self) -> f64 {
        self.hbar * self.flat as f64
    }

    /// Taper weight of one lattice coordinate.
    pub fn window(&self, n: i64) -> f64 {
        let (a, big) = (n.unsigned_abs() as f64, self.flat as f64);
        let x = ((2.0 * big - a) / big).clamp(0.0, 1.0);
        match self.taper {
            Taper::ValleePoussin => x,
            Taper::Smooth => smooth_step(x),
        }
    }

    fn range(&self) -> std::ops::RangeInclusive<i64> {
        let m = 2 * self.flat as i64 - 1;
        -m..=m
    }

    /// Lattice points with nonzero weight and their weights ħ³ w(n⃗), in
    /// lexicographic order of (n₁, n₂, n₃).
    pub fn nodes(&self) -> Vec<(Vector3<f64>, f64)> {
        let h3 = self.hbar.powi(3);
        let mut out = Vec::new();
        for a in self.range() {
            for b in self.range() {
                for c in self.range() {
                    let w = self.window(a) * self.window(b) * self.window(c) * h3;
                    out.push((Vector3::new(a as f64, b as f64, c as f64) * self.hbar, w));
                }
            }
        }
        out
    }

    /// One factor Σₙ w(n) cos(nx) of the separable kernel.
    pub fn kernel_factor(&self, x: f64) -> f64 {
        self.range().map(|n| self.window(n) * (n as f64 * x).cos()).sum()
    }

    /// V(γ⃗) = Πᵢ Σₙ w(n) e^{−iγᵢn}, real and even.
    pub fn kernel(&self, gamma_vec: &Vector3<f64>) -> f64 {
        gamma_vec.iter().map(|&x| self.kernel_factor(x)).product()
    }

    /// Discrete version of f̃(r⃗) = ∫ d³ρ e^{i r⃗·ρ⃗} f(ρ⃗) for samples in
    /// `nodes()` order. Frequencies beyond the lattice Nyquist limit
    /// |rᵢ| ħ ≤ π alias and are rejected.
    pub fn fourier(&self, samples: &[Complex64], r: &Vector3<f64>) -> Result<Complex64> {
        let nodes = self.nodes();
        if samples.len() != nodes.len() {
            return Err(Error::InvalidResolution(format!(
                "expected {} momentum samples, got {}",
                nodes.len(),
                samples.len()
            )));
        }
        let ratio = r.amax() * self.hbar;
        if ratio > PI {
            return Err(Error::UnderResolved { ratio, bound: PI });
        }
        Ok(nodes
            .iter()
            .zip(samples)
            .map(|((rho, w), f)| f * Complex64::from_polar(*w, r.dot(rho)))
            .sum())
    }
}

/// f̃(r⃗) of samples on a momentum grid; see [`MomentumGrid::fourier`].
pub fn fourier_momentum(grid: &MomentumGrid, samples: &[Complex64], r: &Vector3<f64>) -> Result<Complex64> {
    grid.fourier(samples, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_factor_matches_fejer_closed_form() {
        // Σ w(n) e^{inx} = 2F_{2N}(x) − F_N(x), F_M(x) = sin²(Mx/2) / (M sin²(x/2))
        let g = MomentumGrid::new(1.0, 5).unwrap().with_taper(Taper::ValleePoussin);
        let fejer = |m: f64, x: f64| (m * x / 2.0).sin().powi(2) / (m * (x / 2.0).sin().powi(2));
        for x in [0.3, 1.1, 2.9] {
            let closed = 2.0 * fejer(10.0, x) - fejer(5.0, x);
            assert!((g.kernel_factor(x) - closed).abs() < 1e-12);
        }
        assert!((g.kernel_factor(0.0) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn point_mass_transforms_to_a_plane_wave() {
        let g = MomentumGrid::new(0.5, 3).unwrap();
        let nodes = g.nodes();
        let target = nodes.iter().position(|(rho, _)| (rho - Vector3::new(0.5, -1.0, 1.5)).norm() < 1e-12).unwrap();
        let mut samples = vec![Complex64::new(0.0, 0.0); nodes.len()];
        samples[target] = Complex64::from(1.0 / nodes[target].1);
        let r = Vector3::new(0.7, 0.2, -1.3);
        let got = fourier_momentum(&g, &samples, &r).unwrap();
        assert!((got - Complex64::from_polar(1.0, r.dot(&nodes[target].0))).norm() < 1e-13);
    }

    #[test]
    fn gaussian_transform_and_aliasing_guard() {
        let (hbar, sigma) = (0.25, 1.0);
        let g = MomentumGrid::new(hbar, 24).unwrap();
        let norm = (2.0 * PI * sigma * sigma).powf(-1.5);
        let samples: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|(rho, _)| Complex64::from(norm * (-rho.norm_squared() / (2.0 * sigma * sigma)).exp()))
            .collect();
        let r = Vector3::new(0.4, -0.9, 0.3);
        let got = fourier_momentum(&g, &samples, &r).unwrap();
        let expect = (-0.5 * sigma * sigma * r.norm_squared()).exp();
        assert!((got - expect).norm() < 1e-10);
        assert!(matches!(
            fourier_momentum(&g, &samples, &Vector3::new(13.0, 0.0, 0.0)),
            Err(Error::UnderResolved { .. })
        ));
    }

    #[test]
    fn window_and_extent() {
        let g = MomentumGrid::for_band_limit(0.5, 3).unwrap();
        assert_eq!(g.flat, 5);
        assert!((g.extent() - 2.5).abs() < 1e-15);
        assert_eq!(g.window(5), 1.0);
        assert_eq!(g.window(10), 0.0);
        assert!((g.window(7) - smooth_step(0.6)).abs() < 1e-15);
        assert!((g.with_taper(Taper::ValleePoussin).window(7) - 0.6).abs() < 1e-15);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        assert!(MomentumGrid::new(0.0, 3).is_err());
    }
}
