//! Left and right translation generators Yₖ, Zₖ.
//!
//! `Yₖ f(𝓡) = d/dh f(e^{hξₖ}𝓡)` and `Zₖ f(𝓡) = d/dh f(𝓡e^{hξₖ})` at h = 0.

use super::charts::{rotation_to_euler, EulerAngles, CHART_SINGULARITY};
use super::field::ScalarField;
use super::rotation::Rotation;
use crate::error::{Error, Result};
use crate::fd::{FieldValue, FiniteDifference};
use serde::{Deserialize, Serialize};

/// One of the six generators, with a zero-based axis index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    Y(usize),
    Z(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMethod {
    /// Chart expressions of the generators applied to Euler-angle partials.
    Analytic,
    FiniteDifference(FiniteDifference),
}

impl Default for DerivativeMethod {
    fn default() -> Self {
        DerivativeMethod::FiniteDifference(FiniteDifference::default())
    }
}

/// Applies the chart expression of `which` to the partials (∂_φ, ∂_θ, ∂_ψ).
pub fn chart_generator<T: FieldValue>(which: Generator, e: &EulerAngles, d: [T; 3]) -> Result<T> {
    let (st, ct) = e.theta.sin_cos();
    if st.abs() < CHART_SINGULARITY {
        return Err(Error::SingularChart { sin_theta: st });
    }
    let [dphi, dtheta, dpsi] = d;
    Ok(match which {
        Generator::Y(k) => {
            let (sp, cp) = e.phi.sin_cos();
            let tilt = dpsi - dphi.scale(ct);
            match k {
                0 => dtheta.scale(cp) + tilt.scale(sp / st),
                1 => dtheta.scale(sp) - tilt.scale(cp / st),
                _ => dphi,
            }
        }
        Generator::Z(k) => {
            let (sp, cp) = e.psi.sin_cos();
            let tilt = dphi - dpsi.scale(ct);
            match k {
                0 => dtheta.scale(cp) + tilt.scale(sp / st),
                1 => tilt.scale(cp / st) - dtheta.scale(sp),
                _ => dpsi,
            }
        }
    })
}

/// Zₖ f at `r` by a central difference of f(𝓡e^{±hξₖ}).
pub fn right_derivative<T: FieldValue>(
    f: impl Fn(&Rotation) -> T,
    k: usize,
    r: &Rotation,
    fd: &FiniteDifference,
) -> T {
    fd.derivative(|s| f(&(*r * Rotation::about_axis(k, s))))
}

/// Yₖ f at `r` by a central difference of f(e^{±hξₖ}𝓡).
pub fn left_derivative<T: FieldValue>(
    f: impl Fn(&Rotation) -> T,
    k: usize,
    r: &Rotation,
    fd: &FiniteDifference,
) -> T {
    fd.derivative(|s| f(&(Rotation::about_axis(k, s) * *r)))
}

/// Zᵢ Zⱼ f at `r`, i.e. ∂ₛ∂ₜ f(𝓡e^{sξᵢ}e^{tξⱼ}) at s = t = 0.
pub fn right_derivative2<T: FieldValue>(
    f: impl Fn(&Rotation) -> T,
    i: usize,
    j: usize,
    r: &Rotation,
    fd: &FiniteDifference,
) -> T {
    fd.derivative(|s| {
        let rs = *r * Rotation::about_axis(i, s);
        fd.derivative(|t| f(&(rs * Rotation::about_axis(j, t))))
    })
}

/// Yᵢ Yⱼ f at `r`, i.e. ∂ₛ∂ₜ f(e^{tξⱼ}e^{sξᵢ}𝓡) at s = t = 0.
pub fn left_derivative2<T: FieldValue>(
    f: impl Fn(&Rotation) -> T,
    i: usize,
    j: usize,
    r: &Rotation,
    fd: &FiniteDifference,
) -> T {
    fd.derivative(|s| {
        let rs = Rotation::about_axis(i, s) * *r;
        fd.derivative(|t| f(&(Rotation::about_axis(j, t) * rs)))
    })
}

/// Yᵢ Zⱼ f at `r`.
pub fn mixed_derivative2<T: FieldValue>(
    f: impl Fn(&Rotation) -> T,
    i: usize,
    j: usize,
    r: &Rotation,
    fd: &FiniteDifference,
) -> T {
    fd.derivative(|s| {
        let rs = Rotation::about_axis(i, s) * *r;
        fd.derivative(|t| f(&(rs * Rotation::about_axis(j, t))))
    })
}

pub fn apply_generator<T: FieldValue>(
    f: &ScalarField<T>,
    which: Generator,
    r: &Rotation,
    method: DerivativeMethod,
) -> Result<T> {
    match method {
        DerivativeMethod::Analytic => {
            let e = rotation_to_euler(r);
            apply_generator_euler(f, which, &e)
        }
        DerivativeMethod::FiniteDifference(fd) => Ok(match which {
            Generator::Y(k) => left_derivative(|q| f.eval(q), k, r, &fd),
            Generator::Z(k) => right_derivative(|q| f.eval(q), k, r, &fd),
        }),
    }
}

/// Analytic path evaluated at explicit chart coordinates, which keeps fields
/// like f = ψ free of the wrap into [0, 2π).
pub fn apply_generator_euler<T: FieldValue>(
    f: &ScalarField<T>,
    which: Generator,
    e: &EulerAngles,
) -> Result<T> {
    let st = e.theta.sin();
    if st.abs() < CHART_SINGULARITY {
        return Err(Error::SingularChart { sin_theta: st });
    }
    chart_generator(which, e, f.chart_gradient(e))
}
