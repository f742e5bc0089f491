//! Closed-form scalar fields on SO(3).

use super::charts::{rotation_to_euler, EulerAngles};
use super::rotation::Rotation;
use crate::fd::FieldValue;
use std::sync::Arc;

type RotationFn<T> = Arc<dyn Fn(&Rotation) -> T + Send + Sync>;
type ChartFn<T> = Arc<dyn Fn(f64, f64, f64) -> T + Send + Sync>;
type GradientFn<T> = Arc<dyn Fn(f64, f64, f64) -> [T; 3] + Send + Sync>;

/// A real or complex function on SO(3).
///
/// Fields built from a rotation evaluator are single-valued by construction.
/// Fields built from an Euler-angle formula also keep the formula so that the
/// chart expressions of the generators can be applied to it.
#[derive(Clone)]
pub struct ScalarField<T> {
    on_rotation: RotationFn<T>,
    chart: Option<ChartFn<T>>,
    gradient: Option<GradientFn<T>>,
}

impl<T> std::fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("chart", &self.chart.is_some())
            .field("gradient", &self.gradient.is_some())
            .finish()
    }
}

impl<T: FieldValue> ScalarField<T> {
    pub fn from_rotation(f: impl Fn(&Rotation) -> T + Send + Sync + 'static) -> Self {
        Self {
            on_rotation: Arc::new(f),
            chart: None,
            gradient: None,
        }
    }

    /// A field given as f(φ, θ, ψ). The formula should be 2π-periodic in φ and ψ.
    pub fn from_euler(f: impl Fn(f64, f64, f64) -> T + Send + Sync + 'static) -> Self {
        let chart: ChartFn<T> = Arc::new(f);
        let c = chart.clone();
        Self {
            on_rotation: Arc::new(move |r: &Rotation| {
                let e = rotation_to_euler(r);
                c(e.phi, e.theta, e.psi)
            }),
            chart: Some(chart),
            gradient: None,
        }
    }

    /// Attaches exact partial derivatives (∂_φ, ∂_θ, ∂_ψ) of the chart formula.
    pub fn with_gradient(mut self, g: impl Fn(f64, f64, f64) -> [T; 3] + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn eval(&self, r: &Rotation) -> T {
        (self.on_rotation)(r)
    }

    pub fn eval_euler(&self, e: &EulerAngles) -> T {
        match &self.chart {
            Some(c) => c(e.phi, e.theta, e.psi),
            None => self.eval(&e.to_rotation()),
        }
    }

    pub fn has_chart_formula(&self) -> bool {
        self.chart.is_some()
    }

    /// Partial derivatives in the Euler chart, exact if a gradient was attached
    /// and by a fourth-order stencil otherwise.
    pub fn chart_gradient(&self, e: &EulerAngles) -> [T; 3] {
        if let Some(g) = &self.gradient {
            return g(e.phi, e.theta, e.psi);
        }
        let fd = crate::fd::FiniteDifference::fourth_order(1e-4);
        let x = [e.phi, e.theta, e.psi];
        let raw = |y: [f64; 3]| match &self.chart {
            Some(c) => c(y[0], y[1], y[2]),
            None => self.eval(&super::charts::euler_to_rotation(
                &EulerAngles { phi: y[0], theta: y[1], psi: y[2] },
                super::charts::EulerConvention::CovariantE,
            )),
        };
        std::array::from_fn(|a| {
            fd.derivative(|s| {
                let mut y = x;
                y[a] += s;
                raw(y)
            })
        })
    }
}
