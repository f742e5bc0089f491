//! ħ → 0 comparison between f_W of the projected state Ψ = √n e^{iS/ħ}
//! and the action wave f₀ built from the same (n, S).

use super::action::{f0_expectation, ActionWave};
use super::wigner::FourierMoments;
use crate::error::Result;
use crate::geometry::{InertiaTensor, QuadratureGrid};
use crate::wavefunction::{ProjectionOptions, WaveFunction};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitObservable {
    One,
    /// Zero-based component of ρ⃗.
    Rho(usize),
    Hamiltonian(InertiaTensor),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub hbar: f64,
    pub jmax: usize,
    pub truncation_loss: f64,
    pub f_w: f64,
    pub f_0: f64,
    /// |⟨A⟩_{f_W} − ⟨A⟩_{f₀}|.
    pub gap: f64,
    /// For the Hamiltonian only: |⟨A⟩_{f_W} − ε₀ − ⟨A⟩_{f₀}|.
    pub gap_without_zero_point: Option<f64>,
}

/// One row per ħ, with jmax = ⌈scale/ħ⌉. The projected state is normalized
/// before f_W is formed; its truncation loss is reported.
pub fn classical_limit_gap(
    a: &ActionWave,
    hbars: &[f64],
    jmax_scale: f64,
    observable: LimitObservable,
    grid: &QuadratureGrid,
    options: &ProjectionOptions,
) -> Result<Vec<LimitRow>> {
    let f_0 = match observable {
        LimitObservable::One => f0_expectation(a, |_, _| 1.0, grid)?,
        LimitObservable::Rho(k) => f0_expectation(a, |_, p| p[k], grid)?,
        LimitObservable::Hamiltonian(inertia) => f0_expectation(a, |_, p| inertia.kinetic_energy(p), grid)?,
    };
    let mut rows = Vec::with_capacity(hbars.len());
    for &hbar in hbars {
        let jmax = (jmax_scale / hbar).ceil() as usize;
        let (psi, loss) = WaveFunction::from_action_wave(&a.n, &a.s, hbar, jmax, options)?;
        let m = FourierMoments::new(&psi.normalized()?)?;
        let (f_w, zero_point) = match observable {
            LimitObservable::One => (m.norm(), None),
            LimitObservable::Rho(k) => (m.rho(k).0, None),
            LimitObservable::Hamiltonian(inertia) => {
                let e: f64 = inertia.as_array().iter().enumerate().map(|(k, i)| m.rho2(k).0 / (2.0 * i)).sum();
                (e, Some(inertia.zero_point_energy(hbar)))
            }
        };
        rows.push(LimitRow {
            hbar,
            jmax,
            truncation_loss: loss,
            f_w,
            f_0,
            gap: (f_w - f_0).abs(),
            gap_without_zero_point: zero_point.map(|e| (f_w - e - f_0).abs()),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{EulerGrid, ScalarField, SO3_VOLUME};

    fn wave() -> ActionWave {
        // n = (1 + 0.9 𝓡₃₂)/8π², S = 0.8 𝓡₃₃ + 0.6 𝓡₃₁
        let n = ScalarField::from_euler(|_, t, q| (1.0 + 0.9 * t.sin() * q.cos()) / SO3_VOLUME);
        let s = ScalarField::from_euler(|_, t, q| 0.8 * t.cos() + 0.6 * t.sin() * q.sin())
            .with_gradient(|_, t, q| [0.0, -0.8 * t.sin() + 0.6 * t.cos() * q.sin(), 0.6 * t.sin() * q.cos()]);
        ActionWave::new(n, s)
    }

    #[test]
    fn normalization_gap_vanishes() {
        let grid = EulerGrid::for_degree(40).unwrap().to_grid();
        let rows = classical_limit_gap(&wave(), &[0.5, 0.25], 3.0, LimitObservable::One, &grid, &ProjectionOptions::default()).unwrap();
        for r in rows {
            assert!(r.gap < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn momentum_gap_shrinks_with_hbar() {
        let grid = EulerGrid::for_degree(40).unwrap().to_grid();
        let rows =
            classical_limit_gap(&wave(), &[0.5, 0.25, 0.125], 3.0, LimitObservable::Rho(2), &grid, &ProjectionOptions::default())
                .unwrap();
        for w in rows.windows(2) {
            assert!(w[1].gap < w[0].gap, "{rows:?}");
        }
    }

    #[test]
    fn energy_gap_is_reported_with_and_without_zero_point() {
        let grid = EulerGrid::for_degree(40).unwrap().to_grid();
        let inertia = InertiaTensor::new(1.0, 2.0, 3.0).unwrap();
        let rows = classical_limit_gap(
            &wave(),
            &[0.5, 0.25],
            3.0,
            LimitObservable::Hamiltonian(inertia),
            &grid,
            &ProjectionOptions::default(),
        )
        .unwrap();
        for r in &rows {
            assert!(r.gap_without_zero_point.is_some());
        }
        assert!(rows[1].gap < rows[0].gap);
    }
}
