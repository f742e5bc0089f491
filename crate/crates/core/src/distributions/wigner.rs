//! The Wigner-type distribution
//!
//! ```text
//! f_W(𝓡, ρ⃗) = (2πħ)⁻³ ∫_{γ≤π} d³γ j₀²(γ/2) e^{−iγ⃗·ρ⃗/ħ} Ψ(𝓡e^{γ⃗·ξ⃗/2}) Ψ*(𝓡e^{−γ⃗·ξ⃗/2})
//! ```
//!
//! and its averages. The factor j₀²(γ/2) d³γ is the Haar measure in the
//! exponential chart, so the γ-integral uses the `haar` weights of the ball.

use super::momentum::MomentumGrid;
use crate::dynamics::PhaseSpacePoint;
use crate::error::{Error, Result};
use crate::fd::FiniteDifference;
use crate::geometry::{j0, BallResolution, GammaBall, InertiaTensor, Rotation};
use crate::wavefunction::transform::{basis_norm, EulerTransform};
use crate::wavefunction::wigner_d::wigner_d;
use crate::wavefunction::{hamiltonian, OperatorMatrix, WaveFunction};
use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest allowed (node spacing) × |ρ|/ħ, two nodes per oscillation.
pub const NYQUIST_BOUND: f64 = PI;

/// Tolerance on ‖Ψ‖² for routines that assume a normalized state.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

fn check_normalized(psi: &WaveFunction) -> Result<()> {
    let integral = psi.norm_squared();
    if (integral - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { integral });
    }
    Ok(())
}

/// f̃_Ψ(𝓡, r⃗) = Ψ(𝓡e^{ħr⃗·ξ⃗/2}) Ψ*(𝓡e^{−ħr⃗·ξ⃗/2}) for ħ|r⃗| ≤ π.
pub fn f_tilde(psi: &WaveFunction, r: &Rotation, rvec: &Vector3<f64>) -> Result<Complex64> {
    let gamma = rvec * psi.hbar();
    if gamma.norm() > PI {
        return Err(Error::Domain(format!("hbar |r| = {} exceeds pi", gamma.norm())));
    }
    let half = gamma * 0.5;
    Ok(psi.right_translate(&half).evaluate(r) * psi.right_translate(&-half).evaluate(r).conj())
}

/// Real value of f_W with the imaginary part of the quadrature kept as a diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WignerValue {
    pub value: f64,
    pub imaginary: f64,
}

/// f_W of one state on a γ-ball rule.
#[derive(Clone, Debug)]
pub struct WignerDistribution {
    pub psi: WaveFunction,
    pub ball: GammaBall,
    pub nyquist_bound: f64,
}

impl WignerDistribution {
    pub fn new(psi: WaveFunction, resolution: BallResolution) -> Result<Self> {
        Ok(Self {
            psi,
            ball: GammaBall::new(resolution)?,
            nyquist_bound: NYQUIST_BOUND,
        })
    }

    pub fn with_default_grid(psi: WaveFunction) -> Result<Self> {
        Self::new(psi, BallResolution::default())
    }

    pub fn hbar(&self) -> f64 {
        self.psi.hbar()
    }

    /// f̃(𝓡, γ⃗/ħ) at every ball node, in node order.
    pub fn tilde_at_nodes(&self, r: &Rotation) -> Vec<Complex64> {
        // Ψ(𝓡𝓐) = Σ N_j Σ_{nk} a_{nk} D(𝓐)_{nk} with a = D(𝓡)ᵀ c.
        let a: Vec<DMatrix<Complex64>> = self
            .psi
            .blocks()
            .iter()
            .enumerate()
            .map(|(j, c)| wigner_d(j, r).transpose() * c * Complex64::from(basis_norm(j)))
            .collect();
        self.ball
            .nodes
            .par_iter()
            .map(|node| {
                let half = Rotation::exp(&(node.gamma_vec * 0.5));
                let (mut plus, mut minus) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for (j, aj) in a.iter().enumerate() {
                    let d = wigner_d(j, &half);
                    let w = 2 * j + 1;
                    for n in 0..w {
                        for k in 0..w {
                            plus += aj[(n, k)] * d[(n, k)];
                            // D(𝓐⁻¹)_{nk} = conj D(𝓐)_{kn}
                            minus += aj[(n, k)] * d[(k, n)].conj();
                        }
                    }
                }
                plus * minus.conj()
            })
            .collect()
    }

    fn check_resolution(&self, rho: &Vector3<f64>) -> Result<()> {
        let ratio = self.ball.spacing() * rho.norm() / self.hbar();
        if ratio > self.nyquist_bound {
            return Err(Error::UnderResolved {
                ratio,
                bound: self.nyquist_bound,
            });
        }
        Ok(())
    }

    fn eval_from_tilde(&self, tilde: &[Complex64], rho: &Vector3<f64>) -> WignerValue {
        let hbar = self.hbar();
        let pref = (2.0 * PI * hbar).powi(-3);
        let sum = self
            .ball
            .nodes
            .iter()
            .zip(tilde)
            .fold(Complex64::new(0.0, 0.0), |acc, (node, t)| {
                acc + t * Complex64::from_polar(node.haar, -node.gamma_vec.dot(rho) / hbar)
            })
            * pref;
        WignerValue {
            value: sum.re,
            imaginary: sum.im,
        }
    }

    pub fn eval(&self, p: &PhaseSpacePoint) -> Result<WignerValue> {
        self.check_resolution(&p.rho)?;
        Ok(self.eval_from_tilde(&self.tilde_at_nodes(&p.r), &p.rho))
    }

    /// f_W at one orientation and several momenta, sharing the translates.
    pub fn eval_many(&self, r: &Rotation, rhos: &[Vector3<f64>]) -> Result<Vec<WignerValue>> {
        for rho in rhos {
            self.check_resolution(rho)?;
        }
        let tilde = self.tilde_at_nodes(r);
        Ok(rhos.iter().map(|rho| self.eval_from_tilde(&tilde, rho)).collect())
    }

    /// Σ_{n⃗} ħ³ w(n⃗) f_W(𝓡, ħn⃗), evaluated through the exchanged sum
    /// (2π)⁻³ ∫ d³γ j₀²(γ/2) f̃(𝓡, γ⃗/ħ) V(γ⃗).
    pub fn momentum_marginal(&self, r: &Rotation, grid: &MomentumGrid) -> Result<f64> {
        if (grid.hbar - self.hbar()).abs() > 1e-14 * self.hbar() {
            return Err(Error::HbarMismatch {
                left: self.hbar(),
                right: grid.hbar,
            });
        }
        let tilde = self.tilde_at_nodes(r);
        let kernel: Vec<f64> = self.ball.nodes.par_iter().map(|n| grid.kernel(&n.gamma_vec)).collect();
        let sum = self
            .ball
            .nodes
            .iter()
            .zip(&tilde)
            .zip(&kernel)
            .fold(Complex64::new(0.0, 0.0), |acc, ((node, t), v)| acc + t * (node.haar * v));
        Ok(sum.re / (2.0 * PI).powi(3))
    }
}

pub fn wigner_eval(w: &WignerDistribution, p: &PhaseSpacePoint) -> Result<WignerValue> {
    w.eval(p)
}

pub fn momentum_marginal(w: &WignerDistribution, r: &Rotation, grid: &MomentumGrid) -> Result<f64> {
    w.momentum_marginal(r, grid)
}

/// Moments of ρ⃗ over f_W from the γ-kernel
/// K(γ⃗) = j₀²(γ/2) ∫ dv_R Ψ(𝓡e^{γ⃗·ξ⃗/2}) Ψ*(𝓡e^{−γ⃗·ξ⃗/2}).
///
/// Integrating f_W against ρₖ and ρₖ² over ℝ³ leaves the derivatives of
/// δ(γ⃗), so ⟨ρₖ⟩ = −iħ ∂ₖK(0) and ⟨ρₖ²⟩ = −ħ² ∂ₖ²K(0). The SO(3) integral
/// is done by quadrature on an Euler grid that is exact for the product of
/// the two translates, and the γ-derivatives by fourth-order stencils.
#[derive(Clone, Debug)]
pub struct FourierMoments {
    psi: WaveFunction,
    plan: EulerTransform,
    fd: FiniteDifference,
}

impl FourierMoments {
    pub fn new(psi: &WaveFunction) -> Result<Self> {
        check_normalized(psi)?;
        let step = (1e-2f64).min(0.05 / (psi.jmax() as f64 + 1.0));
        Ok(Self {
            psi: psi.clone(),
            plan: EulerTransform::for_products(psi.jmax())?,
            fd: FiniteDifference::fourth_order(step),
        })
    }

    /// K(γ⃗) by quadrature over SO(3).
    pub fn kernel(&self, gamma_vec: &Vector3<f64>) -> Complex64 {
        let half = gamma_vec * 0.5;
        let plus = self.psi.right_translate(&half).synthesize(&self.plan);
        let minus = self.psi.right_translate(&-half).synthesize(&self.plan);
        let prod: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| a * b.conj()).collect();
        self.plan.integrate(&prod) * j0(0.5 * gamma_vec.norm()).powi(2)
    }

    fn along(&self, k: usize, t: f64) -> Complex64 {
        let mut g = Vector3::zeros();
        g[k] = t;
        self.kernel(&g)
    }

    /// ⟨1⟩ = K(0).
    pub fn norm(&self) -> f64 {
        self.kernel(&Vector3::zeros()).re
    }

    /// ⟨ρₖ⟩ with zero-based k, and the imaginary residue.
    pub fn rho(&self, k: usize) -> (f64, f64) {
        let v = Complex64::new(0.0, -self.psi.hbar()) * self.fd.derivative(|t| self.along(k, t));
        (v.re, v.im)
    }

    /// ⟨ρₖ²⟩ with zero-based k, and the imaginary residue.
    pub fn rho2(&self, k: usize) -> (f64, f64) {
        let v = self.fd.second_derivative(|t| self.along(k, t)) * -(self.psi.hbar() * self.psi.hbar());
        (v.re, v.im)
    }
}

/// Both routes for one average. `operator_bare` omits any constant shift,
/// `operator` includes it, and `quadrature` is the phase-space value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectationReport {
    pub operator_bare: f64,
    pub operator: f64,
    pub quadrature: f64,
    pub imaginary: f64,
}

impl ExpectationReport {
    /// quadrature − operator_bare.
    pub fn shift(&self) -> f64 {
        self.quadrature - self.operator_bare
    }

    /// |quadrature − operator|.
    pub fn gap(&self) -> f64 {
        (self.quadrature - self.operator).abs()
    }
}

fn real_expectation(op: &OperatorMatrix, psi: &WaveFunction) -> Result<f64> {
    Ok(op.expectation(psi)?.re)
}

/// ⟨ρₖ⟩ over f_W and ⟨Ψ|L̂′ₖ|Ψ⟩, zero-based k.
pub fn expect_rho(psi: &WaveFunction, k: usize) -> Result<ExpectationReport> {
    let m = FourierMoments::new(psi)?;
    let op = psi.inner_product(&psi.apply_lk(k))?.re;
    let (q, im) = m.rho(k);
    Ok(ExpectationReport {
        operator_bare: op,
        operator: op,
        quadrature: q,
        imaginary: im,
    })
}

/// ⟨ρₖ²⟩ over f_W against ⟨Ψ|L̂′ₖ²|Ψ⟩ (+ ħ²/6 in `operator`).
pub fn expect_rho2(psi: &WaveFunction, k: usize) -> Result<ExpectationReport> {
    let m = FourierMoments::new(psi)?;
    let lk = psi.apply_lk(k);
    let bare = lk.norm_squared();
    let (q, im) = m.rho2(k);
    Ok(ExpectationReport {
        operator_bare: bare,
        operator: bare + psi.hbar() * psi.hbar() / 6.0,
        quadrature: q,
        imaginary: im,
    })
}

/// ⟨H⟩ over f_W against the Hamiltonian without and with the zero-point term.
pub fn expect_h(psi: &WaveFunction, inertia: &InertiaTensor) -> Result<ExpectationReport> {
    let m = FourierMoments::new(psi)?;
    let (hbar, jmax) = (psi.hbar(), psi.jmax());
    let bare = real_expectation(&hamiltonian(inertia, hbar, jmax, false), psi)?;
    let full = real_expectation(&hamiltonian(inertia, hbar, jmax, true), psi)?;
    let inv = inertia.as_array();
    let (mut q, mut im) = (0.0, 0.0);
    for (k, i) in inv.iter().enumerate() {
        let (v, e) = m.rho2(k);
        q += v / (2.0 * i);
        im += e / (2.0 * i);
    }
    Ok(ExpectationReport {
        operator_bare: bare,
        operator: full,
        quadrature: q,
        imaginary: im,
    })
}

/// Both sides of ⟨f_{W1}⟩_{f_{W2}} = |⟨Ψ₁|Ψ₂⟩|²/(2πħ)³.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OverlapReport {
    pub phase_space: f64,
    pub inner_product: f64,
    pub imaginary: f64,
}

impl OverlapReport {
    pub fn difference(&self) -> f64 {
        self.phase_space - self.inner_product
    }

    pub fn relative(&self) -> f64 {
        self.difference().abs() / self.inner_product.abs()
    }
}

/// ∫ d³ρ dv_R f_{W1} f_{W2} by Parseval in ρ⃗:
/// (2πħ)⁻³ ∫_{γ≤π} d³γ j₀⁴(γ/2) ∫ dv_R f̃₁(𝓡, γ⃗/ħ) f̃₂(𝓡, γ⃗/ħ)*.
///
/// The inner integral is a product of four band-limited translates and is
/// done exactly on an Euler grid of degree 4·jmax.
pub fn overlap(psi1: &WaveFunction, psi2: &WaveFunction, resolution: BallResolution) -> Result<OverlapReport> {
    check_normalized(psi1)?;
    check_normalized(psi2)?;
    let hbar = psi1.hbar();
    let ip = psi1.inner_product(psi2)?;
    let jmax = psi1.jmax().max(psi2.jmax());
    let plan = EulerTransform::new(crate::geometry::EulerGrid::for_degree(4 * jmax.max(1))?, jmax);
    let (a, b) = (psi1.with_jmax(jmax), psi2.with_jmax(jmax));
    let ball = GammaBall::new(resolution)?;
    let terms: Vec<Complex64> = ball
        .nodes
        .par_iter()
        .map(|node| {
            let half = node.gamma_vec * 0.5;
            let a_p = a.right_translate(&half).synthesize(&plan);
            let a_m = a.right_translate(&-half).synthesize(&plan);
            let b_p = b.right_translate(&half).synthesize(&plan);
            let b_m = b.right_translate(&-half).synthesize(&plan);
            let prod: Vec<Complex64> = (0..a_p.len())
                .map(|i| a_p[i] * a_m[i].conj() * (b_p[i] * b_m[i].conj()).conj())
                .collect();
            plan.integrate(&prod) * (node.haar * j0(0.5 * node.gamma_vec.norm()).powi(2))
        })
        .collect();
    let sum = terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| acc + t) / (2.0 * PI * hbar).powi(3);
    Ok(OverlapReport {
        phase_space: sum.re,
        inner_product: ip.norm_sqr() / (2.0 * PI * hbar).powi(3),
        imaginary: sum.im,
    })
}
