//! Liouville evolution of f̃_W(𝓡, γ⃗) = j₀²(γ/2) Ψ(𝓡e^{γ⃗·ξ⃗/2}) Ψ*(𝓡e^{−γ⃗·ξ⃗/2})
//! against Schrödinger evolution of Ψ.
//!
//! The exponential chart γ⃗ = γg carries the generators
//!
//! ```text
//! Y^γᵢ = ∂_{γᵢ} + (f − 1)/γ ∇^Aᵢ + ½ (g × ∇^A)ᵢ
//! Z^γᵢ = ∂_{γᵢ} + (f − 1)/γ ∇^Aᵢ − ½ (g × ∇^A)ᵢ,    f(γ) = (γ/2) cot(γ/2),
//! ```
//!
//! where ∂_{γᵢ} = gᵢ∂_γ + ∇^Aᵢ/γ. Their difference λ̂ = g × ∇^A equals
//! γ⃗ × ∇_γ. All γ-derivatives here are Cartesian stencils.

use crate::error::{Error, Result};
use crate::fd::{FieldValue, FiniteDifference};
use crate::geometry::generators::right_derivative;
use crate::geometry::rotation::levi_civita;
use crate::geometry::{j0, InertiaTensor, Rotation};
use crate::wavefunction::{hamiltonian, WaveFunction};
use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

const I_UNIT: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// f(γ) = (γ/2) cot(γ/2) on [0, 2π).
pub fn f_curly(gamma: f64) -> Result<f64> {
    if !(0.0..TAU).contains(&gamma) {
        return Err(Error::Domain(format!("f(gamma) needs 0 <= gamma < 2 pi, got {gamma}")));
    }
    if gamma < 1e-4 {
        // 1 − γ²/12 − γ⁴/720
        let g2 = gamma * gamma;
        return Ok(1.0 - g2 / 12.0 - g2 * g2 / 720.0);
    }
    let h = 0.5 * gamma;
    Ok(h * h.cos() / h.sin())
}

/// Cartesian gradient of h at γ⃗.
pub fn gamma_gradient<T: FieldValue>(h: impl Fn(&Vector3<f64>) -> T, at: &Vector3<f64>, fd: &FiniteDifference) -> [T; 3] {
    std::array::from_fn(|i| {
        fd.derivative(|s| {
            let mut g = *at;
            g[i] += s;
            h(&g)
        })
    })
}

/// Angular part ∇^A = γ(∇ − g ∂_γ) of a gradient at γ⃗.
fn angular<T: FieldValue>(grad: &[T; 3], at: &Vector3<f64>) -> [T; 3] {
    let gamma = at.norm();
    if gamma == 0.0 {
        return [T::zero(), T::zero(), T::zero()];
    }
    let g = at / gamma;
    let radial = grad[0].scale(g[0]) + grad[1].scale(g[1]) + grad[2].scale(g[2]);
    std::array::from_fn(|i| (grad[i] - radial.scale(g[i])).scale(gamma))
}

fn cross<T: FieldValue>(g: &Vector3<f64>, v: &[T; 3]) -> [T; 3] {
    [
        v[2].scale(g[1]) - v[1].scale(g[2]),
        v[0].scale(g[2]) - v[2].scale(g[0]),
        v[1].scale(g[0]) - v[0].scale(g[1]),
    ]
}

/// Generator evaluators on functions of γ⃗ inside the ball γ < π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaChartOperators {
    pub fd: FiniteDifference,
}

impl Default for GammaChartOperators {
    fn default() -> Self {
        Self {
            fd: FiniteDifference::nested(),
        }
    }
}

impl GammaChartOperators {
    pub fn partial<T: FieldValue>(&self, h: impl Fn(&Vector3<f64>) -> T, at: &Vector3<f64>) -> [T; 3] {
        gamma_gradient(h, at, &self.fd)
    }

    /// ∇^A h.
    pub fn angular<T: FieldValue>(&self, h: impl Fn(&Vector3<f64>) -> T, at: &Vector3<f64>) -> [T; 3] {
        angular(&self.partial(h, at), at)
    }

    /// λ̂h = g × ∇^A h.
    pub fn lambda<T: FieldValue>(&self, h: impl Fn(&Vector3<f64>) -> T, at: &Vector3<f64>) -> Result<[T; 3]> {
        Ok(self.assemble(&self.partial(h, at), at)?.2)
    }

    /// (Y^γ h, Z^γ h).
    pub fn y_and_z<T: FieldValue>(&self, h: impl Fn(&Vector3<f64>) -> T, at: &Vector3<f64>) -> Result<([T; 3], [T; 3])> {
        let (y, z, _) = self.assemble(&self.partial(h, at), at)?;
        Ok((y, z))
    }

    fn assemble<T: FieldValue>(&self, grad: &[T; 3], at: &Vector3<f64>) -> Result<([T; 3], [T; 3], [T; 3])> {
        let gamma = at.norm();
        if gamma >= PI {
            return Err(Error::Domain(format!("gamma = {gamma} is outside the open ball of radius pi")));
        }
        let ang = angular(grad, at);
        if gamma == 0.0 {
            return Ok((*grad, *grad, [T::zero(), T::zero(), T::zero()]));
        }
        let c = (f_curly(gamma)? - 1.0) / gamma;
        let lam = cross(&(at / gamma), &ang);
        let y = std::array::from_fn(|i| grad[i] + ang[i].scale(c) + lam[i].scale(0.5));
        let z = std::array::from_fn(|i| grad[i] + ang[i].scale(c) - lam[i].scale(0.5));
        Ok((y, z, lam))
    }
}

/// f̃_W(𝓡, γ⃗) in the γ⃗ = ħr⃗ variable.
pub fn f_tilde_w(psi: &WaveFunction, r: &Rotation, gamma_vec: &Vector3<f64>) -> Complex64 {
    let half = gamma_vec * 0.5;
    let plus = psi.evaluate(&(*r * Rotation::exp(&half)));
    let minus = psi.evaluate(&(*r * Rotation::exp(&-half)));
    plus * minus.conj() * j0(0.5 * gamma_vec.norm()).powi(2)
}

fn check_ball(gamma_vec: &Vector3<f64>) -> Result<()> {
    if gamma_vec.norm() >= PI {
        return Err(Error::Domain(format!("|gamma| = {} must be below pi", gamma_vec.norm())));
    }
    Ok(())
}

/// b̂ᵢ f̃_W = Zᵢ f̃_W − Σⱼₖ εᵢⱼₖ γⱼ ∂_{γₖ} f̃_W by stencils in 𝓡 and γ⃗.
pub fn apply_b(psi: &WaveFunction, r: &Rotation, gamma_vec: &Vector3<f64>, fd: &FiniteDifference) -> Result<[Complex64; 3]> {
    check_ball(gamma_vec)?;
    let grad = gamma_gradient(|g| f_tilde_w(psi, r, g), gamma_vec, fd);
    Ok(std::array::from_fn(|i| {
        let z = right_derivative(|q| f_tilde_w(psi, q, gamma_vec), i, r, fd);
        let mut rot = Complex64::new(0.0, 0.0);
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    rot += grad[k] * (e * gamma_vec[j]);
                }
            }
        }
        z - rot
    }))
}

/// The same quantity from the product rule
/// j₀²(γ/2)[(Û_γ ZᵢΨ)(Û_{−γ}Ψ*) + (Û_γΨ)(Û_{−γ}ZᵢΨ*)], with ZᵢΨ = (i/ħ) L̂′ᵢΨ.
pub fn b_product_rule(psi: &WaveFunction, r: &Rotation, gamma_vec: &Vector3<f64>) -> Result<[Complex64; 3]> {
    check_ball(gamma_vec)?;
    let half = gamma_vec * 0.5;
    let (rp, rm) = (*r * Rotation::exp(&half), *r * Rotation::exp(&-half));
    let (p, m) = (psi.evaluate(&rp), psi.evaluate(&rm));
    let w = j0(0.5 * gamma_vec.norm()).powi(2);
    Ok(std::array::from_fn(|i| {
        let zpsi = &psi.apply_lk(i) * (I_UNIT / psi.hbar());
        (zpsi.evaluate(&rp) * m.conj() + p * zpsi.evaluate(&rm).conj()) * w
    }))
}

/// (â·b̂) f̃_W = Σᵢ Iᵢ⁻¹ ∂_{γᵢ}(b̂ᵢ f̃_W), every derivative by stencils.
pub fn apply_ab(
    psi: &WaveFunction,
    inertia: &InertiaTensor,
    r: &Rotation,
    gamma_vec: &Vector3<f64>,
    fd: &FiniteDifference,
) -> Result<Complex64> {
    if gamma_vec.norm() + 2.0 * fd.step >= PI {
        return Err(Error::Domain(format!("|gamma| = {} leaves no room for the stencil below pi", gamma_vec.norm())));
    }
    let inv = inertia.as_array().map(|i| 1.0 / i);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        let d = fd.derivative(|s| {
            let mut g = *gamma_vec;
            g[i] += s;
            apply_b(psi, r, &g, fd).map(|b| b[i]).unwrap_or(Complex64::new(f64::NAN, 0.0))
        });
        acc += d * inv[i];
    }
    Ok(acc)
}

/// ∂ₜ f̃_W by a fourth-order stencil, halving `dt` until two successive
/// estimates agree to 1e−10 (at most twelve halvings).
pub fn time_derivative(psi_at: &dyn Fn(f64) -> WaveFunction, t: f64, dt: f64, r: &Rotation, gamma_vec: &Vector3<f64>) -> Complex64 {
    let at = |h: f64| FiniteDifference::fourth_order(h).derivative(|s| f_tilde_w(&psi_at(t + s), r, gamma_vec));
    let (mut h, mut prev) = (dt, at(dt));
    for _ in 0..12 {
        h *= 0.5;
        let next = at(h);
        let settled = (next - prev).norm() <= 1e-10 * next.norm().max(1e-3);
        prev = next;
        if settled {
            break;
        }
    }
    prev
}

/// (∂ₜ − iħ â·b̂) f̃_W at (𝓡, γ⃗), time `t`. `psi_at` gives the state at
/// any time; ∂ₜ starts from step `dt`, see [`time_derivative`].
pub fn liouville_residual(
    psi_at: &dyn Fn(f64) -> WaveFunction,
    t: f64,
    dt: f64,
    inertia: &InertiaTensor,
    r: &Rotation,
    gamma_vec: &Vector3<f64>,
) -> Result<Complex64> {
    let psi = psi_at(t);
    let ab = apply_ab(&psi, inertia, r, gamma_vec, &FiniteDifference::nested())?;
    Ok(time_derivative(psi_at, t, dt, r, gamma_vec) - I_UNIT * psi.hbar() * ab)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchrodingerResidual {
    /// ‖∂ₜΨ + iĤΨ/ħ‖.
    pub full: f64,
    /// Same, with the component along Ψ removed.
    pub orthogonal: f64,
}

/// ‖∂ₜΨ + iĤΨ/ħ‖ in the coefficient norm, ∂ₜ by a fourth-order stencil.
pub fn schrodinger_residual(
    psi_at: &dyn Fn(f64) -> WaveFunction,
    t: f64,
    dt: f64,
    inertia: &InertiaTensor,
    include_zero_point: bool,
) -> Result<SchrodingerResidual> {
    let psi = psi_at(t);
    let (p1, m1, p2, m2) = (psi_at(t + dt), psi_at(t - dt), psi_at(t + 2.0 * dt), psi_at(t - 2.0 * dt));
    let first = &(&p1 - &m1) * Complex64::from(8.0);
    let second = &p2 - &m2;
    let dpsi = &(&first - &second) * Complex64::from(1.0 / (12.0 * dt));
    let h = hamiltonian(inertia, psi.hbar(), psi.jmax(), include_zero_point);
    let res = &dpsi + &(&h.apply(&psi) * (I_UNIT / psi.hbar()));
    let full = res.norm_squared().sqrt();
    let along = psi.inner_product(&res)? / psi.norm_squared();
    let orthogonal = (&res - &(&psi * along)).norm_squared().sqrt();
    Ok(SchrodingerResidual { full, orthogonal })
}

/// Residual statistics over a shell |γ⃗| = γ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub gamma: f64,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub samples: usize,
}

/// Fibonacci directions on the unit sphere, a fixed deterministic set.
pub fn sphere_directions(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let s = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            Vector3::new(s * a.cos(), s * a.sin(), z)
        })
        .collect()
}

/// |liouville_residual| over shells of radius `gammas`, orientations
/// `points` and `directions` unit vectors.
pub fn coherence_scan(
    psi_at: &dyn Fn(f64) -> WaveFunction,
    t: f64,
    dt: f64,
    inertia: &InertiaTensor,
    points: &[Rotation],
    gammas: &[f64],
    directions: &[Vector3<f64>],
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let mut values = Vec::with_capacity(points.len() * directions.len());
        for r in points {
            for d in directions {
                values.push(liouville_residual(psi_at, t, dt, inertia, r, &(d * gamma))?.norm());
            }
        }
        let max_abs = values.iter().copied().fold(0.0, f64::max);
        let mean_abs = values.iter().sum::<f64>() / values.len().max(1) as f64;
        rows.push(ScanRow {
            gamma,
            max_abs,
            mean_abs,
            samples: values.len(),
        });
    }
    Ok(rows)
}

/// First scanned γ whose largest residual exceeds `threshold`.
pub fn empirical_crossover(rows: &[ScanRow], threshold: f64) -> Option<f64> {
    rows.iter().find(|r| r.max_abs > threshold).map(|r| r.gamma)
}

#[cfg(test)]
mod tests;
