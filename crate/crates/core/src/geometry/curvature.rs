//! Christoffel symbols and scalar curvature of the left-invariant metric
//! B = Σ Iₖ ζₖ⊗ζₖ.

use super::charts::EulerAngles;
use super::forms::zeta_matrix;
use super::inertia::InertiaTensor;
use super::rotation::levi_civita;
use crate::error::{Error, Result};
use crate::fd::FiniteDifference;
use nalgebra::Matrix3;
use serde::Serialize;

/// Γⁱⱼₖ indexed as `[i][j][k]`, zero-based.
pub type Christoffel = [[[f64; 3]; 3]; 3];

/// Connection coefficients in the Zₖ frame: Γⁱⱼₖ = −(Iⱼ − Iₖ) εᵢⱼₖ / Iᵢ.
pub fn christoffel(inertia: &InertiaTensor) -> Christoffel {
    let iv = inertia.as_array();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| -(iv[j] - iv[k]) * levi_civita(i, j, k) / iv[i]))
    })
}

/// Levi-Civita connection of B in the Zₖ frame, from the Koszul formula:
/// ∇_{Zⱼ}Zₖ = Σᵢ Γⁱⱼₖ Zᵢ with Γⁱⱼₖ = εᵢⱼₖ (Iᵢ − Iⱼ + Iₖ) / 2Iᵢ.
///
/// Its part symmetric in (j, k), the only part entering the geodesic
/// equation, is half of [`christoffel`].
pub fn levi_civita_connection(inertia: &InertiaTensor) -> Christoffel {
    let iv = inertia.as_array();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| levi_civita(i, j, k) * (iv[i] - iv[j] + iv[k]) / (2.0 * iv[i]))
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Curvature {
    pub christoffel: Christoffel,
    /// Scalar curvature of B, computed from the chart metric by finite differences.
    pub scalar: f64,
}

/// Point at which the chart computation is carried out. The metric is
/// left-invariant, so its scalar curvature is the same everywhere.
pub const CURVATURE_PROBE: EulerAngles = EulerAngles {
    phi: 0.7,
    theta: 1.1,
    psi: 0.4,
};

pub fn curvature(inertia: &InertiaTensor) -> Result<Curvature> {
    Ok(Curvature {
        christoffel: christoffel(inertia),
        scalar: scalar_curvature(inertia, &CURVATURE_PROBE, &FiniteDifference::nested())?,
    })
}

/// Chart metric g = ζᵀ diag(I) ζ in the (φ, θ, ψ) basis.
pub fn chart_metric(inertia: &InertiaTensor, x: [f64; 3]) -> Matrix3<f64> {
    let z = zeta_matrix(&EulerAngles {
        phi: x[0],
        theta: x[1],
        psi: x[2],
    });
    z.transpose() * Matrix3::from_diagonal(&inertia.as_vector()) * z
}

/// Coordinate Christoffel symbols Γ^λ_{μν} of the chart metric, `[λ][μ][ν]`.
fn chart_christoffel(inertia: &InertiaTensor, x: [f64; 3], fd: &FiniteDifference) -> Result<Christoffel> {
    let g = chart_metric(inertia, x);
    let g_inv = g
        .try_inverse()
        .ok_or(Error::SingularChart { sin_theta: x[1].sin() })?;
    let dg: [Matrix3<f64>; 3] = std::array::from_fn(|a| {
        Matrix3::from_fn(|m, n| {
            fd.derivative(|s| {
                let mut y = x;
                y[a] += s;
                chart_metric(inertia, y)[(m, n)]
            })
        })
    });
    Ok(std::array::from_fn(|l| {
        std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                0.5 * (0..3)
                    .map(|s| g_inv[(l, s)] * (dg[m][(s, n)] + dg[n][(s, m)] - dg[s][(m, n)]))
                    .sum::<f64>()
            })
        })
    }))
}

/// Ricci scalar gᵘᵛ R_{μν} with
/// R_{μν} = ∂_λΓ^λ_{μν} − ∂_νΓ^λ_{μλ} + Γ^λ_{λσ}Γ^σ_{μν} − Γ^λ_{νσ}Γ^σ_{μλ}.
pub fn scalar_curvature(inertia: &InertiaTensor, at: &EulerAngles, fd: &FiniteDifference) -> Result<f64> {
    let x = [at.phi, at.theta, at.psi];
    if x[1].sin().abs() < 1e-3 {
        return Err(Error::SingularChart { sin_theta: x[1].sin() });
    }
    let gamma = chart_christoffel(inertia, x, fd)?;
    let mut d_gamma = [[[[0.0; 3]; 3]; 3]; 3];
    for (a, slot) in d_gamma.iter_mut().enumerate() {
        let plus = |s: f64| {
            let mut y = x;
            y[a] += s;
            chart_christoffel(inertia, y, fd)
        };
        let h = fd.step;
        let samples = [plus(h)?, plus(-h)?, plus(2.0 * h)?, plus(-2.0 * h)?];
        for l in 0..3 {
            for m in 0..3 {
                for n in 0..3 {
                    let f = |q: usize| samples[q][l][m][n];
                    slot[l][m][n] = match fd.stencil {
                        crate::fd::Stencil::Central2 => (f(0) - f(1)) / (2.0 * h),
                        crate::fd::Stencil::Central4 => (8.0 * (f(0) - f(1)) - (f(2) - f(3))) / (12.0 * h),
                    };
                }
            }
        }
    }
    let g_inv = chart_metric(inertia, x)
        .try_inverse()
        .ok_or(Error::SingularChart { sin_theta: x[1].sin() })?;
    let mut scalar = 0.0;
    for m in 0..3 {
        for n in 0..3 {
            let mut ricci = 0.0;
            for l in 0..3 {
                ricci += d_gamma[l][l][m][n] - d_gamma[n][l][m][l];
                for s in 0..3 {
                    ricci += gamma[l][l][s] * gamma[s][m][n] - gamma[l][n][s] * gamma[s][m][l];
                }
            }
            scalar += g_inv[(m, n)] * ricci;
        }
    }
    Ok(scalar)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scalar curvature of a left-invariant metric with principal moments (a₁, a₂, a₃).
    fn milnor(i: [f64; 3]) -> f64 {
        let [a, b, c] = i;
        (2.0 * (a * b + b * c + c * a) - (a * a + b * b + c * c)) / (2.0 * a * b * c)
    }

    #[test]
    fn spherical_top_is_flat_connection_and_curvature_three_halves() {
        let i = InertiaTensor::spherical(1.0).unwrap();
        let c = curvature(&i).unwrap();
        assert!(c.christoffel.iter().flatten().flatten().all(|g| *g == 0.0));
        assert!((c.scalar - 1.5).abs() < 1e-6, "{}", c.scalar);
    }

    #[test]
    fn christoffel_closed_form_entry() {
        let g = christoffel(&InertiaTensor::new(1.0, 2.0, 3.0).unwrap());
        assert_eq!(g[0][1][2], 1.0);
        assert_eq!(g[0][2][1], 1.0);
        assert_eq!(g[1][0][2], -1.0);
    }

    #[test]
    fn koszul_connection_is_metric_and_torsion_free() {
        let i = InertiaTensor::new(1.0, 2.0, 3.0).unwrap();
        let iv = i.as_array();
        let lc = levi_civita_connection(&i);
        let table = christoffel(&i);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    // torsion: ∇_{Z_b}Z_c − ∇_{Z_c}Z_b = [Z_b, Z_c]
                    assert!((lc[a][b][c] - lc[a][c][b] - levi_civita(b, c, a)).abs() < 1e-15);
                    // metric compatibility: B(∇_b Z_c, Z_a) + B(Z_c, ∇_b Z_a) = 0
                    assert!((iv[a] * lc[a][b][c] + iv[c] * lc[c][b][a]).abs() < 1e-15);
                    let sym = 0.5 * (lc[a][b][c] + lc[a][c][b]);
                    assert!((2.0 * sym - table[a][b][c]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn asymmetric_curvature_matches_left_invariant_formula() {
        for iv in [[1.0, 2.0, 3.0], [0.5, 0.5, 2.0], [2.0, 2.0, 2.0]] {
            let i = InertiaTensor::new(iv[0], iv[1], iv[2]).unwrap();
            let r = curvature(&i).unwrap().scalar;
            assert!((r - milnor(iv)).abs() < 1e-6, "{iv:?}: {r} vs {}", milnor(iv));
        }
    }

    #[test]
    fn curvature_is_independent_of_the_chart_point() {
        let i = InertiaTensor::new(1.0, 2.0, 3.0).unwrap();
        let fd = FiniteDifference::nested();
        let a = scalar_curvature(&i, &EulerAngles { phi: 0.1, theta: 0.6, psi: 2.0 }, &fd).unwrap();
        let b = scalar_curvature(&i, &EulerAngles { phi: 3.0, theta: 2.2, psi: 5.0 }, &fd).unwrap();
        assert!((a - b).abs() < 1e-6);
    }
}
