//! Quadrature rules on SO(3): product rules in the Euler chart and on the
//! ball γ ≤ π of the exponential chart with weight j₀²(γ/2).

use super::charts::{euler_to_rotation, EulerAngles, EulerConvention};
use super::rotation::Rotation;
use crate::error::{Error, Result};
use crate::fd::FieldValue;
use gauss_quad::hermite::GaussHermite;
use gauss_quad::legendre::GaussLegendre;
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

/// Volume of SO(3) for dv_R = sin θ dφ dθ dψ.
pub const SO3_VOLUME: f64 = 8.0 * PI * PI;

fn positive(n: usize, what: &str) -> Result<NonZeroUsize> {
    NonZeroUsize::new(n).ok_or_else(|| Error::InvalidResolution(format!("{what} must be positive")))
}

/// Gauss–Legendre nodes and weights on [−1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = GaussLegendre::new(positive(n, "Gauss-Legendre order")?);
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (x, w) = gauss_legendre(n)?;
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    Ok((
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    ))
}

/// Gauss–Hermite nodes and weights for ∫ e^{−x²} f(x) dx, nodes ascending.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = GaussHermite::new(positive(n, "Gauss-Hermite order")?);
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Spherical Bessel function j₀(x) = sin x / x.
pub fn j0(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Density of dv_R relative to d³γ in the exponential chart: j₀²(γ/2).
pub fn haar_weight(gamma: f64) -> f64 {
    let j = j0(0.5 * gamma);
    j * j
}

/// Product rule in the Euler chart: uniform in φ and ψ, Gauss–Legendre in cos θ.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerGrid {
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_weights: Vec<f64>,
    pub psi: Vec<f64>,
}

impl EulerGrid {
    pub fn new(n_phi: usize, n_theta: usize, n_psi: usize) -> Result<Self> {
        positive(n_phi, "phi resolution")?;
        positive(n_psi, "psi resolution")?;
        let (x, w) = gauss_legendre(n_theta)?;
        // Ascending θ.
        let theta: Vec<f64> = x.iter().rev().map(|c| c.acos()).collect();
        let theta_weights: Vec<f64> = w.iter().rev().copied().collect();
        Ok(Self {
            phi: (0..n_phi).map(|a| TAU * a as f64 / n_phi as f64).collect(),
            theta,
            theta_weights,
            psi: (0..n_psi).map(|a| TAU * a as f64 / n_psi as f64).collect(),
        })
    }

    /// Rule exact for products of D-functions with total degree up to `degree`.
    pub fn for_degree(degree: usize) -> Result<Self> {
        let n = degree + 1;
        Self::new(n, n.div_ceil(2) + 1, n)
    }

    /// Weight of node (a, b, c) for ∫ dv_R.
    pub fn weight(&self, b: usize) -> f64 {
        self.theta_weights[b] * TAU * TAU / (self.phi.len() * self.psi.len()) as f64
    }

    pub fn len(&self) -> usize {
        self.phi.len() * self.theta.len() * self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_grid(&self) -> QuadratureGrid {
        let mut nodes = Vec::with_capacity(self.len());
        let mut weights = Vec::with_capacity(self.len());
        for &phi in &self.phi {
            for (b, &theta) in self.theta.iter().enumerate() {
                for &psi in &self.psi {
                    nodes.push(euler_to_rotation(
                        &EulerAngles { phi, theta, psi },
                        EulerConvention::CovariantE,
                    ));
                    weights.push(self.weight(b));
                }
            }
        }
        QuadratureGrid {
            chart: Chart::Euler,
            nodes,
            weights,
        }
    }
}

/// Resolution of the γ-ball rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallResolution {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for BallResolution {
    fn default() -> Self {
        Self {
            radial: 32,
            polar: 24,
            azimuthal: 48,
        }
    }
}

/// One node of the ball rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallNode {
    pub gamma_vec: Vector3<f64>,
    /// Weight for ∫ d³γ j₀²(γ/2) f(γ⃗), i.e. for ∫ dv_R.
    pub haar: f64,
    /// Weight for the flat measure ∫ d³γ f(γ⃗).
    pub flat: f64,
}

/// Product rule on γ ≤ π: Gauss–Legendre in γ, Gauss–Legendre in cos β,
/// trapezoid in α.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaBall {
    pub resolution: BallResolution,
    pub nodes: Vec<BallNode>,
}

impl GammaBall {
    pub fn new(resolution: BallResolution) -> Result<Self> {
        let (g, gw) = gauss_legendre_on(resolution.radial, 0.0, PI)?;
        let (cb, cbw) = gauss_legendre(resolution.polar)?;
        let na = positive(resolution.azimuthal, "azimuthal resolution")?.get();
        let wa = TAU / na as f64;
        let mut nodes = Vec::with_capacity(g.len() * cb.len() * na);
        for (&gamma, &w_gamma) in g.iter().zip(&gw) {
            // γ² j₀²(γ/2) = 4 sin²(γ/2)
            let radial_flat = w_gamma * gamma * gamma;
            let radial_haar = w_gamma * 4.0 * (0.5 * gamma).sin().powi(2);
            for (&c, &w_c) in cb.iter().zip(&cbw) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for a in 0..na {
                    let alpha = wa * a as f64;
                    let dir = Vector3::new(alpha.cos() * s, alpha.sin() * s, c);
                    nodes.push(BallNode {
                        gamma_vec: dir * gamma,
                        haar: radial_haar * w_c * wa,
                        flat: radial_flat * w_c * wa,
                    });
                }
            }
        }
        Ok(Self { resolution, nodes })
    }

    /// Largest node spacing, measured at the rim γ = π.
    pub fn spacing(&self) -> f64 {
        let r = self.resolution;
        let radial = PI / r.radial as f64;
        let polar = PI * PI / r.polar as f64;
        let azimuthal = PI * TAU / r.azimuthal as f64;
        radial.max(polar).max(azimuthal)
    }

    pub fn to_grid(&self) -> QuadratureGrid {
        QuadratureGrid {
            chart: Chart::Exponential,
            nodes: self.nodes.iter().map(|n| Rotation::exp(&n.gamma_vec)).collect(),
            weights: self.nodes.iter().map(|n| n.haar).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Euler,
    Exponential,
}

/// Nodes and weights for ∫ dv_R f over SO(3).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    pub chart: Chart,
    pub nodes: Vec<Rotation>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Sums in node order, so results do not depend on thread count.
    pub fn integrate<T: FieldValue>(&self, f: impl Fn(&Rotation) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (r, w)| acc + f(r).scale(*w))
    }

    pub fn volume(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Euler chart: `resolution` Gauss nodes in cos θ and 2·`resolution` points in φ and ψ.
/// Exponential chart: `resolution` radial and polar nodes, 2·`resolution` azimuthal.
pub fn so3_quadrature(chart: Chart, resolution: usize) -> Result<QuadratureGrid> {
    positive(resolution, "resolution")?;
    match chart {
        Chart::Euler => Ok(EulerGrid::new(2 * resolution, resolution, 2 * resolution)?.to_grid()),
        Chart::Exponential => Ok(GammaBall::new(BallResolution {
            radial: resolution,
            polar: resolution,
            azimuthal: 2 * resolution,
        })?
        .to_grid()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_weight_endpoints() {
        assert_eq!(haar_weight(0.0), 1.0);
        assert!((haar_weight(PI) - 4.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn radial_oracle_for_ball_volume() {
        // 16π ∫₀^π sin²(γ/2) dγ = 8π²
        let (x, w) = gauss_legendre_on(40, 0.0, PI).unwrap();
        let radial: f64 = x.iter().zip(&w).map(|(g, w)| w * (0.5 * g).sin().powi(2)).sum();
        assert!((16.0 * PI * radial - SO3_VOLUME).abs() < 1e-12);
    }

    #[test]
    fn both_charts_give_the_group_volume() {
        for chart in [Chart::Euler, Chart::Exponential] {
            let g = so3_quadrature(chart, 8).unwrap();
            assert!((g.volume() - SO3_VOLUME).abs() < 1e-6, "{chart:?}");
        }
        let ball = GammaBall::new(BallResolution::default()).unwrap();
        let v: f64 = ball.nodes.iter().map(|n| n.haar).sum();
        assert!((v - SO3_VOLUME).abs() < 1e-9);
        let flat: f64 = ball.nodes.iter().map(|n| n.flat).sum();
        assert!((flat - 4.0 * PI * PI.powi(3) / 3.0).abs() < 1e-9);
    }

    #[test]
    fn charts_agree_on_a_smooth_class_function_and_a_matrix_entry() {
        let f = |r: &Rotation| {
            let m = r.matrix();
            (m.trace() * 0.7).exp() + m[(0, 2)] * m[(2, 1)]
        };
        let e = so3_quadrature(Chart::Euler, 16).unwrap().integrate(f);
        let x = so3_quadrature(Chart::Exponential, 24).unwrap().integrate(f);
        assert!((e - x).abs() < 1e-8, "{e} vs {x}");
    }

    #[test]
    fn zero_resolution_is_rejected() {
        assert!(matches!(so3_quadrature(Chart::Euler, 0), Err(Error::InvalidResolution(_))));
    }

    #[test]
    fn hermite_rule_integrates_gaussian_moments() {
        let (x, w) = gauss_hermite(10).unwrap();
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-12);
    }
}
