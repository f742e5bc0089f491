//! Finite-difference stencils shared by the generator, bracket and residual code.

use num_complex::Complex64;
use std::ops::{Add, Sub};

/// Values a field may take: real or complex scalars.
pub trait FieldValue:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + std::fmt::Debug + 'static
{
    fn zero() -> Self;
    fn scale(self, s: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl FieldValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl FieldValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    /// Three-point central difference, O(h²).
    Central2,
    /// Five-point central difference, O(h⁴).
    Central4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteDifference {
    pub step: f64,
    pub stencil: Stencil,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        Self::central(1e-5)
    }
}

impl FiniteDifference {
    pub const fn central(step: f64) -> Self {
        Self {
            step,
            stencil: Stencil::Central2,
        }
    }

    pub const fn fourth_order(step: f64) -> Self {
        Self {
            step,
            stencil: Stencil::Central4,
        }
    }

    /// Stencil used when derivatives are nested two or three levels deep.
    pub const fn nested() -> Self {
        Self::fourth_order(1e-3)
    }

    /// d/ds f(s) at s = 0.
    pub fn derivative<T: FieldValue>(&self, f: impl Fn(f64) -> T) -> T {
        let h = self.step;
        match self.stencil {
            Stencil::Central2 => (f(h) - f(-h)).scale(0.5 / h),
            Stencil::Central4 => {
                let a = f(h) - f(-h);
                let b = f(2.0 * h) - f(-2.0 * h);
                (a.scale(8.0) - b).scale(1.0 / (12.0 * h))
            }
        }
    }

    /// d²/ds² f(s) at s = 0.
    pub fn second_derivative<T: FieldValue>(&self, f: impl Fn(f64) -> T) -> T {
        let h = self.step;
        match self.stencil {
            Stencil::Central2 => (f(h) + f(-h) - f(0.0).scale(2.0)).scale(1.0 / (h * h)),
            Stencil::Central4 => {
                let inner = (f(h) + f(-h)).scale(16.0);
                let outer = f(2.0 * h) + f(-2.0 * h);
                (inner - outer - f(0.0).scale(30.0)).scale(1.0 / (12.0 * h * h))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_are_exact_on_low_order_polynomials() {
        let cubic = |s: f64| 1.0 + 2.0 * s - 3.0 * s * s + 0.5 * s * s * s;
        let c2 = FiniteDifference::central(1e-3);
        let c4 = FiniteDifference::fourth_order(1e-2);
        assert!((c2.derivative(cubic) - 2.0).abs() < 1e-6);
        assert!((c4.derivative(cubic) - 2.0).abs() < 1e-10);
        assert!((c4.second_derivative(cubic) + 6.0).abs() < 1e-8);
    }

    #[test]
    fn fourth_order_converges_faster() {
        let f = |s: f64| (1.3 * s).sin();
        let exact = 1.3;
        let e2 = (FiniteDifference::central(1e-2).derivative(f) - exact).abs();
        let e4 = (FiniteDifference::fourth_order(1e-2).derivative(f) - exact).abs();
        assert!(e4 < e2 * 1e-3);
    }
}
