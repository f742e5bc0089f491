//! Euler-angle and axis-angle charts on SO(3).

use super::rotation::{canonical_axis_sign, Rotation};
use crate::error::{Error, Result};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Below this value of sin θ the Euler chart is treated as singular.
pub const CHART_SINGULARITY: f64 = 1e-7;

fn wrap_tau(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Euler angles in the X-convention: 𝓡ᵉ = e^{φξ₃} e^{θξ₁} e^{ψξ₃}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

/// Which of the two matrix parametrizations to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerConvention {
    /// 𝓡ᵉ = e^{φξ₃} e^{θξ₁} e^{ψξ₃}
    CovariantE,
    /// 𝓡^q = (𝓡ᵉ)ᵀ
    ContravariantQ,
}

impl EulerAngles {
    /// Wraps φ and ψ into [0, 2π). θ must lie in [0, π].
    pub fn new(phi: f64, theta: f64, psi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
        }
        Ok(Self {
            phi: wrap_tau(phi),
            theta,
            psi: wrap_tau(psi),
        })
    }

    pub fn to_rotation(&self) -> Rotation {
        euler_to_rotation(self, EulerConvention::CovariantE)
    }

    pub fn is_singular(&self) -> bool {
        self.theta.sin().abs() < CHART_SINGULARITY
    }

    /// Converts angles given in the Y-convention used in quantum mechanics texts
    /// (second rotation about the y axis) to this chart.
    pub fn from_y_convention(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(alpha + FRAC_PI_2, beta, gamma - FRAC_PI_2)
    }

    /// Inverse of [`EulerAngles::from_y_convention`], returned as (α, β, γ).
    pub fn to_y_convention(&self) -> (f64, f64, f64) {
        (
            wrap_tau(self.phi - FRAC_PI_2),
            self.theta,
            wrap_tau(self.psi + FRAC_PI_2),
        )
    }
}

pub fn euler_to_rotation(e: &EulerAngles, convention: EulerConvention) -> Rotation {
    let r = Rotation::about_axis(2, e.phi) * Rotation::about_axis(0, e.theta)
        * Rotation::about_axis(2, e.psi);
    match convention {
        EulerConvention::CovariantE => r,
        EulerConvention::ContravariantQ => r.transpose(),
    }
}

/// Euler angles of a covariant rotation matrix.
///
/// At θ ∈ {0, π} only φ ± ψ is determined; ψ = 0 is returned there.
pub fn rotation_to_euler(r: &Rotation) -> EulerAngles {
    let m = r.matrix();
    let theta = m[(2, 2)].clamp(-1.0, 1.0).acos();
    let sin_theta = (m[(0, 2)].powi(2) + m[(1, 2)].powi(2)).sqrt();
    let (phi, psi) = if sin_theta < CHART_SINGULARITY {
        (m[(1, 0)].atan2(m[(0, 0)]), 0.0)
    } else {
        (m[(0, 2)].atan2(-m[(1, 2)]), m[(2, 0)].atan2(m[(2, 1)]))
    };
    EulerAngles {
        phi: wrap_tau(phi),
        theta,
        psi: wrap_tau(psi),
    }
}

/// Rotation vector γ⃗ = γ g with γ ∈ [0, π] and g = (cos α sin β, sin α sin β, cos β).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    gamma_vec: Vector3<f64>,
}

impl AxisAngle {
    /// Reduces an arbitrary rotation vector to the canonical representative.
    pub fn new(v: Vector3<f64>) -> Self {
        if v.norm() < PI - 1e-15 {
            return Self { gamma_vec: v };
        }
        rotation_to_axis_angle(&Rotation::exp(&v))
    }

    pub fn from_polar(gamma: f64, alpha: f64, beta: f64) -> Self {
        let g = Vector3::new(alpha.cos() * beta.sin(), alpha.sin() * beta.sin(), beta.cos());
        Self::new(g * gamma)
    }

    pub fn gamma_vec(&self) -> Vector3<f64> {
        self.gamma_vec
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_vec.norm()
    }

    /// Unit axis; `None` at the identity.
    pub fn axis(&self) -> Option<Vector3<f64>> {
        let g = self.gamma();
        (g > 0.0).then(|| self.gamma_vec / g)
    }

    /// Polar angle β of the axis (0 at the identity).
    pub fn beta(&self) -> f64 {
        self.axis().map_or(0.0, |g| g.z.clamp(-1.0, 1.0).acos())
    }

    /// Azimuth α of the axis in [0, 2π).
    pub fn alpha(&self) -> f64 {
        self.axis().map_or(0.0, |g| wrap_tau(g.y.atan2(g.x)))
    }
}

/// The two representatives ±π g of a half turn are the same rotation; the
/// one whose first nonzero axis component is positive is returned.
pub fn rotation_to_axis_angle(r: &Rotation) -> AxisAngle {
    let mut v = r.log();
    let gamma = v.norm();
    if (gamma - PI).abs() < 1e-12 {
        v = canonical_axis_sign(v / gamma) * PI;
    }
    AxisAngle { gamma_vec: v }
}

pub fn axis_angle_to_rotation(a: &AxisAngle) -> Rotation {
    Rotation::exp(&a.gamma_vec)
}

/// Euler angles from (γ, α, β) by the closed-form trigonometric relations.
pub fn axis_angle_to_euler_closed_form(a: &AxisAngle) -> Result<EulerAngles> {
    let (gamma, alpha, beta) = (a.gamma(), a.alpha(), a.beta());
    let (s, c) = gamma.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let half = (0.5 * gamma).sin();
    let cos_theta = (1.0 - 2.0 * sb * sb * half * half).clamp(-1.0, 1.0);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    if sin_theta < CHART_SINGULARITY {
        return Err(Error::SingularChart { sin_theta });
    }
    let u = (1.0 - c) * cb;
    let phi = (u * ca + s * sa).atan2(-(u * sa - s * ca));
    let psi = (u * ca - s * sa).atan2(u * sa + s * ca);
    Ok(EulerAngles {
        phi: wrap_tau(phi),
        theta: cos_theta.acos(),
        psi: wrap_tau(psi),
    })
}

/// Closed form away from θ ∈ {0, π}, matrix route otherwise.
pub fn axis_angle_to_euler(a: &AxisAngle) -> EulerAngles {
    axis_angle_to_euler_closed_form(a)
        .unwrap_or_else(|_| rotation_to_euler(&axis_angle_to_rotation(a)))
}
