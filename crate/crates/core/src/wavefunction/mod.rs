//! Wave functions on SO(3) in the Wigner D-function basis
//! φ^j_{mk} = √((2j+1)/8π²) D^j_{mk}, together with the intrinsic angular
//! momentum operators, the rotor Hamiltonian and exact time evolution.
//!
//! Coefficients are stored per j as (2j+1)×(2j+1) blocks `c[(m + j, k + j)]`.
//! Operators acting on the intrinsic (right) index k act on a block as
//! `c ↦ c·Aᵀ`.

pub mod io;
pub mod transform;
pub mod wigner_d;

use crate::error::{Error, Result};
use crate::geometry::{EulerGrid, InertiaTensor, Rotation, ScalarField};
use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};
use transform::{basis_norm, EulerTransform};
use wigner_d::{body_matrices, hermitian_exp, wigner_d, wigner_d_exp};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    hbar: f64,
    blocks: Vec<DMatrix<Complex64>>,
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("hbar must be positive, got {hbar}")))
    }
}

fn empty_blocks(jmax: usize) -> Vec<DMatrix<Complex64>> {
    (0..=jmax).map(|j| DMatrix::zeros(2 * j + 1, 2 * j + 1)).collect()
}

fn index(j: usize, m: i64, k: i64) -> Result<(usize, usize)> {
    let ji = j as i64;
    if m.abs() > ji || k.abs() > ji {
        return Err(Error::InvalidState(format!("|m|, |k| must not exceed j: j={j} m={m} k={k}")));
    }
    Ok(((m + ji) as usize, (k + ji) as usize))
}

impl WaveFunction {
    pub fn zero(hbar: f64, jmax: usize) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(Self {
            hbar,
            blocks: empty_blocks(jmax),
        })
    }

    /// The normalized basis function φ^j_{mk}.
    pub fn basis(hbar: f64, jmax: usize, j: usize, m: i64, k: i64) -> Result<Self> {
        if j > jmax {
            return Err(Error::InvalidState(format!("j = {j} exceeds jmax = {jmax}")));
        }
        let mut psi = Self::zero(hbar, jmax)?;
        psi.set(j, m, k, Complex64::new(1.0, 0.0))?;
        Ok(psi)
    }

    pub fn from_blocks(hbar: f64, blocks: Vec<DMatrix<Complex64>>) -> Result<Self> {
        check_hbar(hbar)?;
        if blocks.is_empty() {
            return Err(Error::InvalidState("at least the j = 0 block is required".into()));
        }
        for (j, b) in blocks.iter().enumerate() {
            if b.nrows() != 2 * j + 1 || b.ncols() != 2 * j + 1 {
                return Err(Error::InvalidState(format!("block {j} has shape {:?}", b.shape())));
            }
            if b.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidState(format!("block {j} has non-finite entries")));
            }
        }
        Ok(Self { hbar, blocks })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn jmax(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn get(&self, j: usize, m: i64, k: i64) -> Complex64 {
        match (self.blocks.get(j), index(j, m, k)) {
            (Some(b), Ok(ix)) => b[ix],
            _ => ZERO,
        }
    }

    pub fn set(&mut self, j: usize, m: i64, k: i64, value: Complex64) -> Result<()> {
        let ix = index(j, m, k)?;
        let b = self
            .blocks
            .get_mut(j)
            .ok_or_else(|| Error::InvalidState(format!("j = {j} exceeds jmax")))?;
        b[ix] = value;
        Ok(())
    }

    /// Copy with a different band limit (zero padding or truncation).
    pub fn with_jmax(&self, jmax: usize) -> Self {
        let mut blocks = empty_blocks(jmax);
        for (j, b) in self.blocks.iter().enumerate().take(jmax + 1) {
            blocks[j] = b.clone();
        }
        Self { hbar: self.hbar, blocks }
    }

    pub fn norm_squared(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_squared().sqrt();
        if !(n > 0.0) {
            return Err(Error::InvalidState("cannot normalize the zero state".into()));
        }
        Ok(self * Complex64::new(1.0 / n, 0.0))
    }

    fn map_blocks(&self, f: impl Fn(usize, &DMatrix<Complex64>) -> DMatrix<Complex64>) -> Self {
        Self {
            hbar: self.hbar,
            blocks: self.blocks.iter().enumerate().map(|(j, b)| f(j, b)).collect(),
        }
    }

    /// Ψ(𝓡) = Σ c^j_{mk} φ^j_{mk}(𝓡).
    pub fn evaluate(&self, r: &Rotation) -> Complex64 {
        self.blocks
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let d = wigner_d(j, r);
                c.iter().zip(d.iter()).map(|(a, b)| a * b).sum::<Complex64>() * basis_norm(j)
            })
            .sum()
    }

    /// ⟨self|other⟩ = Σ c̄₁c₂, zero-padding the smaller band limit.
    pub fn inner_product(&self, other: &WaveFunction) -> Result<Complex64> {
        if (self.hbar - other.hbar).abs() > 1e-14 * self.hbar.max(other.hbar) {
            return Err(Error::HbarMismatch {
                left: self.hbar,
                right: other.hbar,
            });
        }
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dotc(b))
            .sum())
    }

    /// L̂′ₖ = −iħZₖ with zero-based axis k; acts on the intrinsic index with ħJ̃ₖ.
    pub fn apply_lk(&self, k: usize) -> Self {
        self.map_blocks(|j, c| c * body_matrices(j)[k].transpose() * Complex64::from(self.hbar))
    }

    /// Ψ'(𝓡) = Ψ(𝓡 e^{γ⃗·ξ⃗}).
    pub fn right_translate(&self, gamma_vec: &Vector3<f64>) -> Self {
        self.map_blocks(|j, c| c * wigner_d_exp(j, gamma_vec).transpose())
    }

    /// Ψ'(𝓡) = Ψ(𝓐𝓡), acting on the laboratory index m.
    pub fn left_translate(&self, a: &Rotation) -> Self {
        self.map_blocks(|j, c| wigner_d(j, a).transpose() * c)
    }

    /// Values at every node of an Euler-grid transform.
    pub fn synthesize(&self, plan: &EulerTransform) -> Vec<Complex64> {
        plan.synthesize(&self.blocks)
    }

    /// Projects Ψ = √n e^{iS/ħ} onto the basis up to `jmax`.
    ///
    /// Returns the state together with the truncation loss 1 − Σ|c|².
    pub fn from_action_wave(
        n: &ScalarField<f64>,
        s: &ScalarField<f64>,
        hbar: f64,
        jmax: usize,
        options: &ProjectionOptions,
    ) -> Result<(Self, f64)> {
        check_hbar(hbar)?;
        let degree = options.grid_degree.unwrap_or(2 * jmax + 48);
        let plan = EulerTransform::new(EulerGrid::for_degree(degree)?, jmax);
        let nodes = plan.grid.to_grid().nodes;
        let mut density = Vec::with_capacity(nodes.len());
        let mut values = Vec::with_capacity(nodes.len());
        for r in &nodes {
            let nv = n.eval(r);
            if !(nv >= 0.0) {
                return Err(Error::Domain(format!("density must be non-negative, got {nv}")));
            }
            density.push(nv);
            values.push(Complex64::from_polar(nv.sqrt(), s.eval(r) / hbar));
        }
        let integral = plan.integrate_real(&density);
        if (integral - 1.0).abs() > options.normalization_tolerance {
            return Err(Error::NotNormalized { integral });
        }
        let psi = Self::from_blocks(hbar, plan.analyze(&values)?)?;
        let loss = (integral - psi.norm_squared()).max(0.0);
        if loss > options.loss_bound {
            return Err(Error::TruncationLossExceeded {
                loss,
                bound: options.loss_bound,
            });
        }
        Ok((psi, loss))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionOptions {
    /// Degree of the Euler grid used for the projection integrals.
    pub grid_degree: Option<usize>,
    pub loss_bound: f64,
    pub normalization_tolerance: f64,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            grid_degree: None,
            loss_bound: 1e-3,
            normalization_tolerance: 1e-6,
        }
    }
}

impl Add<&WaveFunction> for &WaveFunction {
    type Output = WaveFunction;
    fn add(self, rhs: &WaveFunction) -> WaveFunction {
        let jmax = self.jmax().max(rhs.jmax());
        let (a, b) = (self.with_jmax(jmax), rhs.with_jmax(jmax));
        a.map_blocks(|j, c| c + &b.blocks[j])
    }
}

impl Sub<&WaveFunction> for &WaveFunction {
    type Output = WaveFunction;
    fn sub(self, rhs: &WaveFunction) -> WaveFunction {
        self + &(rhs * Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &WaveFunction {
    type Output = WaveFunction;
    fn mul(self, rhs: Complex64) -> WaveFunction {
        self.map_blocks(|_, c| c * rhs)
    }
}

/// Block-diagonal operator acting on the intrinsic index of each j-block.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub blocks: Vec<DMatrix<Complex64>>,
}

impl OperatorMatrix {
    pub fn jmax(&self) -> usize {
        self.blocks.len() - 1
    }

    /// L̂′ₖ with zero-based axis k.
    pub fn lk(hbar: f64, jmax: usize, k: usize) -> Self {
        Self {
            blocks: (0..=jmax).map(|j| &body_matrices(j)[k] * Complex64::from(hbar)).collect(),
        }
    }

    pub fn apply(&self, psi: &WaveFunction) -> WaveFunction {
        psi.map_blocks(|j, c| match self.blocks.get(j) {
            Some(a) => c * a.transpose(),
            None => DMatrix::zeros(c.nrows(), c.ncols()),
        })
    }

    /// Operator product: `(self ∘ other) ψ = self(other(ψ))`.
    pub fn compose(&self, other: &OperatorMatrix) -> OperatorMatrix {
        Self {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        Self {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> OperatorMatrix {
        Self {
            blocks: self.blocks.iter().map(|a| a * s).collect(),
        }
    }

    /// ⟨ψ|A|ψ⟩.
    pub fn expectation(&self, psi: &WaveFunction) -> Result<Complex64> {
        psi.inner_product(&self.apply(psi))
    }

    /// Eigenvalues of block j in ascending order (Hermitian operators only).
    pub fn eigenvalues(&self, j: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks[j].clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.blocks.iter().map(|a| (a - a.adjoint()).norm()).fold(0.0, f64::max)
    }
}

/// Ĥ = Σₖ L̂′ₖ²/2Iₖ, plus ε₀ = Σₖ ħ²/12Iₖ when `include_zero_point` is set.
pub fn hamiltonian(inertia: &InertiaTensor, hbar: f64, jmax: usize, include_zero_point: bool) -> OperatorMatrix {
    let eps0 = if include_zero_point {
        inertia.zero_point_energy(hbar)
    } else {
        0.0
    };
    OperatorMatrix {
        blocks: (0..=jmax)
            .map(|j| {
                let b = body_matrices(j);
                let n = 2 * j + 1;
                let mut h = DMatrix::<Complex64>::identity(n, n) * Complex64::from(eps0);
                for (k, bk) in b.iter().enumerate() {
                    h += bk * bk * Complex64::from(hbar * hbar / (2.0 * inertia.get(k)));
                }
                h
            })
            .collect(),
    }
}

/// Σₖ L̂′ₖ².
pub fn casimir(hbar: f64, jmax: usize) -> OperatorMatrix {
    let ones = InertiaTensor::spherical(0.5).expect("positive");
    hamiltonian(&ones, hbar, jmax, false)
}

/// Exact evolution e^{−iĤt/ħ} from a per-block Hermitian eigendecomposition.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub hbar: f64,
    pub hamiltonian: OperatorMatrix,
}

impl Propagator {
    pub fn new(inertia: &InertiaTensor, hbar: f64, jmax: usize, include_zero_point: bool) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(Self {
            hbar,
            hamiltonian: hamiltonian(inertia, hbar, jmax, include_zero_point),
        })
    }

    pub fn evolve(&self, psi: &WaveFunction, t: f64) -> WaveFunction {
        psi.map_blocks(|j, c| match self.hamiltonian.blocks.get(j) {
            Some(h) => c * hermitian_exp(h, -t / self.hbar).transpose(),
            None => c.clone(),
        })
    }
}

pub fn schrodinger_evolve(
    psi: &WaveFunction,
    inertia: &InertiaTensor,
    t: f64,
    include_zero_point: bool,
) -> Result<WaveFunction> {
    Ok(Propagator::new(inertia, psi.hbar(), psi.jmax(), include_zero_point)?.evolve(psi, t))
}
