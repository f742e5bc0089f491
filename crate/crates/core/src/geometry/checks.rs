//! Pointwise residuals of the structure equations, the ζ/Z duality and the
//! generator commutators, bundled for sweeps over many chart points.

use super::charts::{rotation_to_euler, EulerAngles};
use super::forms::{structure_equation_residual, zeta_matrix};
use super::generators::{left_derivative, left_derivative2, mixed_derivative2, right_derivative, right_derivative2};
use super::rotation::{levi_civita, Rotation};
use crate::error::Result;
use crate::fd::FiniteDifference;
use nalgebra::Vector3;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// max |ζᵢ(Zⱼ) − δᵢⱼ|, with Zⱼ applied to the chart coordinates by finite
/// differences along 𝓡e^{sξⱼ}.
pub fn duality_residual(e: &EulerAngles, fd: &FiniteDifference) -> f64 {
    let r = e.to_rotation();
    let z = zeta_matrix(e);
    let centre = [e.phi, e.theta, e.psi];
    let mut worst = 0.0f64;
    for j in 0..3 {
        let v = Vector3::from_fn(|a, _| {
            right_derivative(
                |q: &Rotation| {
                    let f = rotation_to_euler(q);
                    let x = [f.phi, f.theta, f.psi][a];
                    centre[a] + (x - centre[a] + PI).rem_euclid(TAU) - PI
                },
                j,
                &r,
                fd,
            )
        });
        let pairing = z * v;
        for i in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((pairing[i] - delta).abs());
        }
    }
    worst
}

/// Largest residual of [Zᵢ, Zⱼ] = Σ εᵢⱼₖ Zₖ, [Yᵢ, Yⱼ] = −Σ εᵢⱼₖ Yₖ and
/// [Yᵢ, Zⱼ] = 0 applied to `f` at `r`.
pub fn commutator_residual(f: impl Fn(&Rotation) -> f64 + Copy, r: &Rotation) -> f64 {
    let fd = FiniteDifference::nested();
    let fd1 = FiniteDifference::fourth_order(1e-3);
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let mut zz = right_derivative2(f, i, j, r, &fd) - right_derivative2(f, j, i, r, &fd);
            let mut yy = left_derivative2(f, i, j, r, &fd) - left_derivative2(f, j, i, r, &fd);
            for k in 0..3 {
                zz -= levi_civita(i, j, k) * right_derivative(f, k, r, &fd1);
                yy += levi_civita(i, j, k) * left_derivative(f, k, r, &fd1);
            }
            let yz = mixed_derivative2(f, i, j, r, &fd);
            let zy = fd.derivative(|t| {
                let rt = *r * Rotation::about_axis(j, t);
                fd.derivative(|s| f(&(Rotation::about_axis(i, s) * rt)))
            });
            worst = worst.max(zz.abs()).max(yy.abs()).max((yz - zy).abs());
        }
    }
    worst
}

/// Probe function for the commutator checks: a smooth, generic combination
/// of matrix entries.
pub fn probe_field(r: &Rotation) -> f64 {
    let m = r.matrix();
    m[(0, 1)] * m[(2, 2)] + (m[(1, 0)] + 0.3 * m[(2, 1)]).sin() + m[(0, 0)] * m[(1, 2)]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct GeometryReport {
    pub points: usize,
    pub structure: f64,
    pub duality: f64,
    pub commutator: f64,
}

impl GeometryReport {
    pub fn worst(&self) -> f64 {
        self.structure.max(self.duality).max(self.commutator)
    }
}

/// Maxima of the three residual families over `points`.
pub fn geometry_suite(points: &[EulerAngles]) -> Result<GeometryReport> {
    let mut rep = GeometryReport {
        points: points.len(),
        ..Default::default()
    };
    let fd = FiniteDifference::default();
    let fd_dual = FiniteDifference::fourth_order(1e-4);
    for e in points {
        for i in 0..3 {
            rep.structure = rep.structure.max(structure_equation_residual(i, e, &fd)?);
        }
        rep.duality = rep.duality.max(duality_residual(e, &fd_dual));
        rep.commutator = rep.commutator.max(commutator_residual(probe_field, &e.to_rotation()));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_are_small_at_a_generic_point() {
        let e = EulerAngles::new(0.4, 1.1, 5.0).unwrap();
        let rep = geometry_suite(&[e]).unwrap();
        assert_eq!(rep.points, 1);
        assert!(rep.worst() < 1e-5, "{rep:?}");
    }

    #[test]
    fn a_wrong_bracket_sign_is_detected() {
        // Z-commutators taken against the left generators do not close.
        let r = EulerAngles::new(0.4, 1.1, 5.0).unwrap().to_rotation();
        let fd = FiniteDifference::nested();
        let zz = right_derivative2(probe_field, 0, 1, &r, &fd) - right_derivative2(probe_field, 1, 0, &r, &fd);
        let wrong = zz - left_derivative(probe_field, 2, &r, &FiniteDifference::fourth_order(1e-3));
        assert!(wrong.abs() > 1e-3);
        assert!(commutator_residual(probe_field, &r) < 1e-5);
    }
}
