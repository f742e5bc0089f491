//! Rotation matrices, the generators ξᵢ of so(3), and the exponential map.
//!
//! Conventions: `(ξᵢ)ⱼₖ = −εᵢⱼₖ`, so that `ξᵢ v = eᵢ × v` and
//! `[ξᵢ, ξⱼ] = εᵢⱼₖ ξₖ`. The contravariant generators are `ℓᵢ = −ξᵢ`.

use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use std::ops::Mul;

/// Levi-Civita symbol εᵢⱼₖ for zero-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Generator ξᵢ of the covariant parametrization.
pub fn xi(i: usize) -> Matrix3<f64> {
    Matrix3::from_fn(|j, k| -levi_civita(i, j, k))
}

/// Generator ℓᵢ = −ξᵢ of the contravariant parametrization.
pub fn ell(i: usize) -> Matrix3<f64> {
    -xi(i)
}

/// `Σ vᵢ ξᵢ`, the matrix of `w ↦ v × w`.
pub fn hat(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat`] applied to the antisymmetric part of `a`.
pub fn vee(a: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (a[(2, 1)] - a[(1, 2)]),
        0.5 * (a[(0, 2)] - a[(2, 0)]),
        0.5 * (a[(1, 0)] - a[(0, 1)]),
    )
}

/// Tolerance for accepting a user supplied matrix as a rotation.
pub const ROTATION_TOLERANCE: f64 = 1e-8;

/// An element of SO(3), stored as the covariant matrix 𝓡ᵉ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Validates orthogonality and unit determinant to [`ROTATION_TOLERANCE`].
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let defect = (m.transpose() * m - Matrix3::identity()).norm();
        let det = m.determinant();
        if defect > ROTATION_TOLERANCE || (det - 1.0).abs() > ROTATION_TOLERANCE {
            return Err(Error::NotARotation { defect, det });
        }
        Ok(Self(m))
    }

    /// Nearest rotation to `m` in the Frobenius norm (polar factor).
    pub fn nearest(m: &Matrix3<f64>) -> Self {
        let svd = m.svd(true, true);
        let u = svd.u.expect("svd u");
        let v_t = svd.v_t.expect("svd v_t");
        let mut r = u * v_t;
        if r.determinant() < 0.0 {
            let mut u = u;
            u.column_mut(2).neg_mut();
            r = u * v_t;
        }
        Self(r)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// exp(v·ξ) by the Rodrigues formula; a rotation by |v| about v/|v|.
    pub fn exp(v: &Vector3<f64>) -> Self {
        let theta2 = v.norm_squared();
        let theta = theta2.sqrt();
        let k = hat(v);
        let (a, b) = if theta < 1e-4 {
            (
                1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0,
                0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0,
            )
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
        };
        Self(Matrix3::identity() + k * a + k * k * b)
    }

    /// exp(angle ξᵢ).
    pub fn about_axis(i: usize, angle: f64) -> Self {
        let mut v = Vector3::zeros();
        v[i] = angle;
        Self::exp(&v)
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn inverse(&self) -> Self {
        self.transpose()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// ‖RᵀR − I‖ (Frobenius).
    pub fn orthogonality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).norm()
    }

    pub fn distance(&self, other: &Rotation) -> f64 {
        (self.0 - other.0).norm()
    }

    /// Rotation vector γ⃗ with |γ⃗| ∈ [0, π] such that `exp(γ⃗·ξ) = self`.
    ///
    /// At |γ⃗| = π both ±γ⃗ map to the same rotation; the representative with the
    /// first nonzero component positive is returned.
    pub fn log(&self) -> Vector3<f64> {
        let m = &self.0;
        let s = vee(m);
        let c = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
        let sin_norm = s.norm();
        let gamma = sin_norm.atan2(c);
        if gamma < 1e-6 {
            return s * (1.0 + gamma * gamma / 6.0);
        }
        if c > -0.9 {
            return s * (gamma / sin_norm);
        }
        // Near γ = π the antisymmetric part is small; recover the axis from
        // the symmetric part (1 − cos γ) g gᵀ.
        let b = (m + m.transpose()) * 0.5 - Matrix3::identity() * c;
        let (mut idx, mut best) = (0, b[(0, 0)]);
        for i in 1..3 {
            if b[(i, i)] > best {
                idx = i;
                best = b[(i, i)];
            }
        }
        let mut g: Vector3<f64> = b.column(idx).into();
        g /= g.norm();
        if sin_norm > 1e-12 {
            if g.dot(&s) < 0.0 {
                g = -g;
            }
        } else {
            g = canonical_axis_sign(g);
        }
        g * gamma
    }
}

/// Flips `g` so that its first component with |gᵢ| > 1e-12 is positive.
pub(crate) fn canonical_axis_sign(g: Vector3<f64>) -> Vector3<f64> {
    for i in 0..3 {
        if g[i].abs() > 1e-12 {
            return if g[i] < 0.0 { -g } else { g };
        }
    }
    g
}

impl Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Rotation> for &'a Rotation {
    type Output = Rotation;
    fn mul(self, rhs: &'a Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

impl Mul<Vector3<f64>> for Rotation {
    type Output = Vector3<f64>;
    fn mul(self, rhs: Vector3<f64>) -> Vector3<f64> {
        self.0 * rhs
    }
}
