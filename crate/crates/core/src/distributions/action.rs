//! Classical action waves f₀ = n δ(ρ⃗ − Z⃗S) and their momentum transforms.
//!
//! The delta function is never sampled. Every average over f₀ is the
//! pushforward ∫ dv_R n(𝓡) A(𝓡, Z⃗S(𝓡)).

use crate::error::{Error, Result};
use crate::fd::FiniteDifference;
use crate::geometry::charts::rotation_to_euler;
use crate::geometry::generators::{apply_generator_euler, right_derivative};
use crate::geometry::rotation::levi_civita;
use crate::geometry::{Generator, InertiaTensor, QuadratureGrid, Rotation, ScalarField};
use nalgebra::Vector3;
use num_complex::Complex64;

const I_UNIT: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Z⃗f at `r`: chart formula when the field carries one, a fourth-order
/// stencil on right translates otherwise.
pub fn z_gradient(f: &ScalarField<f64>, r: &Rotation) -> Result<Vector3<f64>> {
    if f.has_chart_formula() {
        let e = rotation_to_euler(r);
        let mut out = Vector3::zeros();
        for k in 0..3 {
            out[k] = apply_generator_euler(f, Generator::Z(k), &e)?;
        }
        Ok(out)
    } else {
        let fd = FiniteDifference::nested();
        Ok(Vector3::from_fn(|k, _| right_derivative(|q| f.eval(q), k, r, &fd)))
    }
}

/// Density and action of a classical action wave, with optional time
/// derivatives used by the residual checks.
#[derive(Clone, Debug)]
pub struct ActionWave {
    pub n: ScalarField<f64>,
    pub s: ScalarField<f64>,
    pub dn_dt: Option<ScalarField<f64>>,
    pub ds_dt: Option<ScalarField<f64>>,
}

impl ActionWave {
    pub fn new(n: ScalarField<f64>, s: ScalarField<f64>) -> Self {
        Self {
            n,
            s,
            dn_dt: None,
            ds_dt: None,
        }
    }

    pub fn with_rates(mut self, dn_dt: ScalarField<f64>, ds_dt: ScalarField<f64>) -> Self {
        self.dn_dt = Some(dn_dt);
        self.ds_dt = Some(ds_dt);
        self
    }

    /// Rates that satisfy the continuity and Hamilton–Jacobi equations at
    /// this instant: ∂ₜS = −H(Z⃗S) and ∂ₜn = −Σₖ Zₖ(n ZₖS)/Iₖ.
    pub fn with_consistent_rates(self, inertia: &InertiaTensor) -> Self {
        let inv = inertia.as_array().map(|i| 1.0 / i);
        let (n, s) = (self.n.clone(), self.s.clone());
        let ds_dt = ScalarField::from_rotation(move |r| {
            let p = z_gradient(&s, r).unwrap_or_else(|_| Vector3::repeat(f64::NAN));
            -(0..3).map(|k| 0.5 * p[k] * p[k] * inv[k]).sum::<f64>()
        });
        let s = self.s.clone();
        let dn_dt = ScalarField::from_rotation(move |r| {
            -divergence_term(&n, &s, &inv, r).unwrap_or(f64::NAN)
        });
        self.with_rates(dn_dt, ds_dt)
    }

    /// Intrinsic momentum Z⃗S on the graph of the wave.
    pub fn momentum(&self, r: &Rotation) -> Result<Vector3<f64>> {
        z_gradient(&self.s, r)
    }

    /// ∫ n dv_R on `grid`.
    pub fn total_density(&self, grid: &QuadratureGrid) -> f64 {
        grid.integrate(|r| self.n.eval(r))
    }

    fn rates(&self) -> Result<(&ScalarField<f64>, &ScalarField<f64>)> {
        match (&self.dn_dt, &self.ds_dt) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InvalidState("time-derivative fields are required".into())),
        }
    }
}

/// Σₖ Zₖ(n ZₖS)/Iₖ at `r`.
fn divergence_term(n: &ScalarField<f64>, s: &ScalarField<f64>, inv: &[f64; 3], r: &Rotation) -> Result<f64> {
    let fd = FiniteDifference::nested();
    let mut acc = 0.0;
    for k in 0..3 {
        // evaluate once at the base point so chart errors surface as errors
        z_gradient(s, r)?;
        let flux = |q: &Rotation| n.eval(q) * z_gradient(s, q).map(|p| p[k]).unwrap_or(f64::NAN);
        acc += right_derivative(flux, k, r, &fd) * inv[k];
    }
    Ok(acc)
}

/// ⟨A⟩ over f₀ = n δ(ρ⃗ − Z⃗S): ∫ dv_R n(𝓡) A(𝓡, Z⃗S(𝓡)).
pub fn f0_expectation(
    a: &ActionWave,
    observable: impl Fn(&Rotation, &Vector3<f64>) -> f64,
    grid: &QuadratureGrid,
) -> Result<f64> {
    let mut acc = 0.0;
    for (r, w) in grid.nodes.iter().zip(&grid.weights) {
        let p = a.momentum(r)?;
        acc += w * a.n.eval(r) * observable(r, &p);
    }
    Ok(acc)
}

/// Pointwise residuals of the continuity equation and of the gradient of the
/// Hamilton–Jacobi equation. The second value is the Euclidean norm of the
/// three components Zₖ[∂ₜS + Σ(ZⱼS)²/2Iⱼ].
pub fn hj_residual(a: &ActionWave, inertia: &InertiaTensor, at: &Rotation) -> Result<(f64, f64)> {
    let (dn, ds) = a.rates()?;
    let inv = inertia.as_array().map(|i| 1.0 / i);
    let continuity = dn.eval(at) + divergence_term(&a.n, &a.s, &inv, at)?;
    a.momentum(at)?;
    let fd = FiniteDifference::nested();
    let bracket = |q: &Rotation| {
        let p = a.momentum(q).unwrap_or_else(|_| Vector3::repeat(f64::NAN));
        ds.eval(q) + (0..3).map(|j| 0.5 * p[j] * p[j] * inv[j]).sum::<f64>()
    };
    let hj = Vector3::from_fn(|k, _| right_derivative(bracket, k, at, &fd));
    Ok((continuity, hj.norm()))
}

/// f̃₀(𝓡, r⃗) = n e^{i r⃗·Z⃗S}.
pub fn f0_fourier(a: &ActionWave, at: &Rotation, r: &Vector3<f64>) -> Result<Complex64> {
    let p = a.momentum(at)?;
    Ok(Complex64::from_polar(a.n.eval(at), r.dot(&p)))
}

/// |∂ₜf̃ − i Σᵢ Zᵢ∂_{rᵢ}f̃/Iᵢ + i Σ εᵢⱼₖ (rᵢ/Iₖ) ∂_{rⱼ}∂_{rₖ}f̃| for f̃ = f̃₀ at (𝓡, r⃗).
///
/// Momentum derivatives are taken in closed form on e^{i r⃗·Z⃗S}; the
/// generators by fourth-order stencils on right translates.
pub fn fle_residual(a: &ActionWave, inertia: &InertiaTensor, at: &Rotation, r: &Vector3<f64>) -> Result<f64> {
    let (dn, ds) = a.rates()?;
    let inv = inertia.as_array().map(|i| 1.0 / i);
    let n = a.n.eval(at);
    let p = a.momentum(at)?;
    let phase = Complex64::from_polar(1.0, r.dot(&p));
    let f = phase * n;

    let dp_dt = z_gradient(ds, at)?;
    let dt = phase * (Complex64::from(dn.eval(at)) + I_UNIT * n * r.dot(&dp_dt));

    let fd = FiniteDifference::nested();
    let mut transport = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        let g = |q: &Rotation| -> Complex64 {
            let pq = a.momentum(q).unwrap_or_else(|_| Vector3::repeat(f64::NAN));
            I_UNIT * pq[i] * Complex64::from_polar(a.n.eval(q), r.dot(&pq))
        };
        transport += right_derivative(g, i, at, &fd) * inv[i];
    }

    let mut rotation = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    rotation -= e * r[i] * inv[k] * p[j] * p[k];
                }
            }
        }
    }
    let residual = dt - I_UNIT * transport + I_UNIT * f * rotation;
    Ok(residual.norm())
}
