//! Separable synthesis and analysis of band-limited functions on an Euler grid.
//!
//! For each θ node the D-expansion collapses to a two-dimensional
//! trigonometric sum in (φ, ψ), evaluated by direct DFTs.

use super::wigner_d::{minus_i_pow, small_d};
use crate::error::{Error, Result};
use crate::geometry::EulerGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Precomputed small-d tables and twiddles for one Euler grid and band limit.
#[derive(Clone, Debug)]
pub struct EulerTransform {
    pub grid: EulerGrid,
    pub jmax: usize,
    /// `d[b][j]` = small-d matrix of order j at θ_b.
    d: Vec<Vec<DMatrix<f64>>>,
    /// e^{i m φ_a} for m = −J … J, `[a][m + J]`.
    phi_twiddle: Vec<Vec<Complex64>>,
    psi_twiddle: Vec<Vec<Complex64>>,
}

fn twiddles(angles: &[f64], jmax: usize) -> Vec<Vec<Complex64>> {
    let ji = jmax as i64;
    angles
        .iter()
        .map(|&x| (-ji..=ji).map(|m| Complex64::from_polar(1.0, m as f64 * x)).collect())
        .collect()
}

pub fn basis_norm(j: usize) -> f64 {
    ((2 * j + 1) as f64 / (8.0 * std::f64::consts::PI * std::f64::consts::PI)).sqrt()
}

impl EulerTransform {
    pub fn new(grid: EulerGrid, jmax: usize) -> Self {
        let d = grid
            .theta
            .iter()
            .map(|&t| (0..=jmax).map(|j| small_d(j, t)).collect())
            .collect();
        let phi_twiddle = twiddles(&grid.phi, jmax);
        let psi_twiddle = twiddles(&grid.psi, jmax);
        Self {
            grid,
            jmax,
            d,
            phi_twiddle,
            psi_twiddle,
        }
    }

    /// Grid exact for products of two functions band-limited to `jmax`.
    pub fn for_products(jmax: usize) -> Result<Self> {
        Ok(Self::new(EulerGrid::for_degree(2 * jmax)?, jmax))
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Flat node index in the order φ (outer), θ, ψ (inner).
    pub fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.grid.theta.len() + b) * self.grid.psi.len() + c
    }

    /// Values Σ c^j_{mk} φ^j_{mk} at every node. `blocks[j]` holds c^j.
    pub fn synthesize(&self, blocks: &[DMatrix<Complex64>]) -> Vec<Complex64> {
        let jm = self.jmax as i64;
        let w = 2 * self.jmax + 1;
        let (na, nb, nc) = (self.grid.phi.len(), self.grid.theta.len(), self.grid.psi.len());
        let mut out = vec![Complex64::new(0.0, 0.0); na * nb * nc];
        let mut g = DMatrix::<Complex64>::zeros(w, w);
        let mut h = DMatrix::<Complex64>::zeros(na, w);
        for b in 0..nb {
            g.fill(Complex64::new(0.0, 0.0));
            for (j, c) in blocks.iter().enumerate().take(self.jmax + 1) {
                let ji = j as i64;
                let n = basis_norm(j);
                let d = &self.d[b][j];
                for r in 0..2 * j + 1 {
                    for s in 0..2 * j + 1 {
                        let (m, k) = (r as i64 - ji, s as i64 - ji);
                        g[((m + jm) as usize, (k + jm) as usize)] += c[(r, s)] * (d[(r, s)] * n) * minus_i_pow(m - k);
                    }
                }
            }
            // φ transform: h[a][k] = Σ_m e^{imφ_a} g[m][k]
            for a in 0..na {
                let tw = &self.phi_twiddle[a];
                for k in 0..w {
                    h[(a, k)] = (0..w).map(|m| tw[m] * g[(m, k)]).sum();
                }
            }
            for a in 0..na {
                for c in 0..nc {
                    let tw = &self.psi_twiddle[c];
                    out[self.index(a, b, c)] = (0..w).map(|k| tw[k] * h[(a, k)]).sum();
                }
            }
        }
        out
    }

    /// Coefficients ∫ φ^j_{mk}* f dv_R of sampled values, exact when f is
    /// band-limited so that the products with φ^j_{mk} are resolved.
    pub fn analyze(&self, values: &[Complex64]) -> Result<Vec<DMatrix<Complex64>>> {
        if values.len() != self.len() {
            return Err(Error::InvalidResolution(format!(
                "expected {} samples, got {}",
                self.len(),
                values.len()
            )));
        }
        let jm = self.jmax as i64;
        let w = 2 * self.jmax + 1;
        let (na, nb, nc) = (self.grid.phi.len(), self.grid.theta.len(), self.grid.psi.len());
        let mut blocks: Vec<DMatrix<Complex64>> =
            (0..=self.jmax).map(|j| DMatrix::zeros(2 * j + 1, 2 * j + 1)).collect();
        let mut h = DMatrix::<Complex64>::zeros(na, w);
        let mut g = DMatrix::<Complex64>::zeros(w, w);
        for b in 0..nb {
            let wb = self.grid.weight(b);
            // ψ analysis: h[a][k] = Σ_c e^{−ikψ_c} f(a, b, c)
            for a in 0..na {
                for k in 0..w {
                    h[(a, k)] = (0..nc)
                        .map(|c| self.psi_twiddle[c][k].conj() * values[self.index(a, b, c)])
                        .sum();
                }
            }
            for m in 0..w {
                for k in 0..w {
                    g[(m, k)] = (0..na).map(|a| self.phi_twiddle[a][m].conj() * h[(a, k)]).sum();
                }
            }
            for (j, block) in blocks.iter_mut().enumerate() {
                let ji = j as i64;
                let n = basis_norm(j) * wb;
                let d = &self.d[b][j];
                for r in 0..2 * j + 1 {
                    for s in 0..2 * j + 1 {
                        let (m, k) = (r as i64 - ji, s as i64 - ji);
                        block[(r, s)] += g[((m + jm) as usize, (k + jm) as usize)]
                            * (d[(r, s)] * n)
                            * minus_i_pow(m - k).conj();
                    }
                }
            }
        }
        Ok(blocks)
    }

    /// ∫ f dv_R of sampled values, summed in node order.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        let (na, nb, nc) = (self.grid.phi.len(), self.grid.theta.len(), self.grid.psi.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..na {
            for b in 0..nb {
                let wb = self.grid.weight(b);
                for c in 0..nc {
                    acc += values[self.index(a, b, c)] * wb;
                }
            }
        }
        acc
    }

    pub fn integrate_real(&self, values: &[f64]) -> f64 {
        let (na, nb, nc) = (self.grid.phi.len(), self.grid.theta.len(), self.grid.psi.len());
        let mut acc = 0.0;
        for a in 0..na {
            for b in 0..nb {
                let wb = self.grid.weight(b);
                for c in 0..nc {
                    acc += values[self.index(a, b, c)] * wb;
                }
            }
        }
        acc
    }
}
