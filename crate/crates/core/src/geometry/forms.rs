//! The one-forms ζₖ dual to Zₖ and their exterior derivatives in the Euler chart.

use super::charts::{EulerAngles, CHART_SINGULARITY};
use crate::error::{Error, Result};
use crate::fd::FiniteDifference;
use nalgebra::Matrix3;

/// Rows are ζ₁, ζ₂, ζ₃ in the (dφ, dθ, dψ) basis. Multiplying the chart
/// velocity (φ̇, θ̇, ψ̇) gives the intrinsic angular velocity ω′.
pub fn zeta_matrix(e: &EulerAngles) -> Matrix3<f64> {
    zeta_at(e.phi, e.theta, e.psi)
}

fn zeta_at(_phi: f64, theta: f64, psi: f64) -> Matrix3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    Matrix3::new(st * sp, cp, 0.0, st * cp, -sp, 0.0, ct, 0.0, 1.0)
}

/// Columns are the (φ, θ, ψ) components of Z₁, Z₂, Z₃.
pub fn z_field_matrix(e: &EulerAngles) -> Result<Matrix3<f64>> {
    let (st, ct) = e.theta.sin_cos();
    if st.abs() < CHART_SINGULARITY {
        return Err(Error::SingularChart { sin_theta: st });
    }
    let (sp, cp) = e.psi.sin_cos();
    Ok(Matrix3::new(
        sp / st,
        cp / st,
        0.0,
        cp,
        -sp,
        0.0,
        -ct * sp / st,
        -ct * cp / st,
        1.0,
    ))
}

/// Antisymmetric coefficient matrix of a 2-form, `c[(μ, ν)]` multiplying dx^μ ∧ dx^ν / 2.
pub type TwoForm = Matrix3<f64>;

/// Exterior derivative of a one-form with chart components `a(x)`, by central
/// differences: (da)_{μν} = ∂_μ a_ν − ∂_ν a_μ.
pub fn exterior_derivative(a: impl Fn([f64; 3]) -> [f64; 3], x: [f64; 3], fd: &FiniteDifference) -> TwoForm {
    let mut jac = Matrix3::zeros();
    for mu in 0..3 {
        let column = |s: f64| {
            let mut y = x;
            y[mu] += s;
            a(y)
        };
        for nu in 0..3 {
            jac[(mu, nu)] = fd.derivative(|s| column(s)[nu]);
        }
    }
    jac - jac.transpose()
}

/// Wedge product of two one-forms.
pub fn wedge(a: [f64; 3], b: [f64; 3]) -> TwoForm {
    Matrix3::from_fn(|mu, nu| a[mu] * b[nu] - a[nu] * b[mu])
}

/// Coefficient of dφ∧dθ∧dψ in ζ₁∧ζ₂∧ζ₃.
pub fn volume_coefficient(e: &EulerAngles) -> f64 {
    zeta_matrix(e).determinant()
}

/// |dζᵢ + ζⱼ∧ζₖ| (max over chart components), (i, j, k) cyclic, zero-based i.
pub fn structure_equation_residual(i: usize, e: &EulerAngles, fd: &FiniteDifference) -> Result<f64> {
    let st = e.theta.sin();
    if st.abs() < CHART_SINGULARITY {
        return Err(Error::SingularChart { sin_theta: st });
    }
    let row = |x: [f64; 3], r: usize| {
        let z = zeta_at(x[0], x[1], x[2]);
        [z[(r, 0)], z[(r, 1)], z[(r, 2)]]
    };
    let x = [e.phi, e.theta, e.psi];
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let d = exterior_derivative(|y| row(y, i), x, fd);
    let residual = d + wedge(row(x, j), row(x, k));
    Ok(residual.amax())
}
