//! Wigner D-matrices for integer j in the X-convention Euler chart.
//!
//! Phase convention: with the standard small-d function
//! `d^j_{mk}(β) = ⟨jm| e^{−iβJ_y} |jk⟩`,
//!
//! ```text
//! D^j_{mk}(φ, θ, ψ) = e^{imφ} (−i)^{m−k} d^j_{mk}(θ) e^{ikψ}.
//! ```
//!
//! This is the complex conjugate of the textbook D-matrix evaluated at the
//! Y-convention angles (φ − π/2, θ, ψ + π/2). It satisfies
//! `D(𝓡𝓐) = D(𝓡) D(𝓐)` and `D(e^{tξᵢ}) = exp(t·i J̃ᵢ)` with
//! `J̃₁ = J_x`, `J̃₂ = −J_y`, `J̃₃ = J_z`, so that `Z₃ D_{mk} = ik D_{mk}`.
//! Matrices are indexed `[(m + j, k + j)]`.

use crate::geometry::charts::rotation_to_euler;
use crate::geometry::{EulerAngles, Rotation};
use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence.
pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Single element d^j_{mk}(β) = ⟨jm| e^{−iβJ_y} |jk⟩.
pub fn small_d_element(j: i64, m: i64, k: i64, beta: f64) -> f64 {
    if m.abs() > j || k.abs() > j {
        return 0.0;
    }
    let cands = [(j + k, m - k, m - k), (j - k, k - m, 0), (j + m, k - m, 0), (j - m, m - k, m - k)];
    let (n, a, lambda) = cands.iter().copied().min_by_key(|c| c.0).expect("four candidates");
    let b = 2 * j - 2 * n - a;
    let sign = if lambda.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let norm = (binomial(2 * j - n, n + a) / binomial(n + b, b)).sqrt();
    let (s, c) = (0.5 * beta).sin_cos();
    sign * norm * s.powi(a as i32) * c.powi(b as i32) * jacobi(n as usize, a as f64, b as f64, beta.cos())
}

/// The full (2j+1)×(2j+1) small-d matrix.
pub fn small_d(j: usize, beta: f64) -> DMatrix<f64> {
    let ji = j as i64;
    DMatrix::from_fn(2 * j + 1, 2 * j + 1, |r, c| small_d_element(ji, r as i64 - ji, c as i64 - ji, beta))
}

/// (−i)^n for integer n.
pub fn minus_i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// D^j at Euler angles.
pub fn wigner_d_euler(j: usize, e: &EulerAngles) -> DMatrix<Complex64> {
    let d = small_d(j, e.theta);
    let ji = j as i64;
    DMatrix::from_fn(2 * j + 1, 2 * j + 1, |r, c| {
        let (m, k) = (r as i64 - ji, c as i64 - ji);
        Complex64::from_polar(d[(r, c)], m as f64 * e.phi + k as f64 * e.psi) * minus_i_pow(m - k)
    })
}

/// D^j of a rotation matrix, through its Euler angles.
pub fn wigner_d(j: usize, r: &Rotation) -> DMatrix<Complex64> {
    wigner_d_euler(j, &rotation_to_euler(r))
}

/// Standard spin matrices (J_x, J_y, J_z) in the basis m = −j … j.
pub fn spin_matrices(j: usize) -> [DMatrix<Complex64>; 3] {
    let n = 2 * j + 1;
    let jf = j as f64;
    let mut jp = DMatrix::<Complex64>::zeros(n, n);
    for c in 0..n.saturating_sub(1) {
        let m = c as f64 - jf;
        jp[(c + 1, c)] = Complex64::new((jf * (jf + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let jz = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new(r as f64 - jf, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    [jx, jy, jz]
}

/// Body-frame matrices (J̃₁, J̃₂, J̃₃) = (J_x, −J_y, J_z), the Hermitian
/// generators with D(e^{tξᵢ}) = exp(t·iJ̃ᵢ).
pub fn body_matrices(j: usize) -> [DMatrix<Complex64>; 3] {
    let [jx, jy, jz] = spin_matrices(j);
    [jx, -jy, jz]
}

/// D^j(exp(γ⃗·ξ⃗)) = exp(i γ⃗·J̃) by Hermitian diagonalization; valid for any γ⃗.
pub fn wigner_d_exp(j: usize, gamma_vec: &Vector3<f64>) -> DMatrix<Complex64> {
    let [b1, b2, b3] = body_matrices(j);
    let h = b1 * Complex64::from(gamma_vec.x) + b2 * Complex64::from(gamma_vec.y) + b3 * Complex64::from(gamma_vec.z);
    hermitian_exp(&h, 1.0)
}

/// exp(i·s·H) for Hermitian H.
pub fn hermitian_exp(h: &DMatrix<Complex64>, s: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (I * (s * l)).exp()));
    v * phases * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::charts::EulerAngles;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        // scaling and squaring around a Taylor series
        let n = a.nrows();
        let scale = 8;
        let b = a / Complex64::from(2f64.powi(scale));
        let mut term = DMatrix::identity(n, n);
        let mut sum = DMatrix::identity(n, n);
        for k in 1..30 {
            term = term * &b / Complex64::from(k as f64);
            sum += &term;
        }
        for _ in 0..scale {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn d1_00_is_cos_theta() {
        for beta in [0.0, 0.3, 1.7, PI] {
            assert!((small_d_element(1, 0, 0, beta) - beta.cos()).abs() < 1e-15);
        }
        // d^1_{1,0}(β) = −sin β / √2
        assert!((small_d_element(1, 1, 0, 0.4) + 0.4_f64.sin() / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn small_d_matches_exponential_of_jy() {
        for j in 0..=6 {
            let [_, jy, _] = spin_matrices(j);
            for beta in [0.1, 1.3, 2.9] {
                let oracle = expm(&(jy.clone() * Complex64::new(0.0, -beta)));
                let d = small_d(j, beta).map(Complex64::from);
                assert!((oracle - d).norm() < 1e-12, "j={j} beta={beta}");
            }
        }
    }

    #[test]
    fn euler_route_matches_generator_exponentials() {
        for j in 0..=5 {
            let b = body_matrices(j);
            let e = EulerAngles { phi: 0.7, theta: 1.9, psi: -2.3 };
            let oracle = expm(&(&b[2] * Complex64::new(0.0, e.phi)))
                * expm(&(&b[0] * Complex64::new(0.0, e.theta)))
                * expm(&(&b[2] * Complex64::new(0.0, e.psi)));
            assert!((oracle - wigner_d_euler(j, &e)).norm() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn body_matrices_obey_the_intrinsic_algebra() {
        // [J̃ᵢ, J̃ⱼ] = −i εᵢⱼₖ J̃ₖ
        for j in 1..=3 {
            let b = body_matrices(j);
            let comm = &b[0] * &b[1] - &b[1] * &b[0];
            assert!((comm + &b[2] * I).norm() < 1e-13);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn representation_is_a_homomorphism(
            a in prop::array::uniform3(-2.0..2.0f64),
            b in prop::array::uniform3(-2.0..2.0f64),
            j in 0usize..5,
        ) {
            let (ra, rb) = (Rotation::exp(&Vector3::from(a)), Rotation::exp(&Vector3::from(b)));
            let lhs = wigner_d(j, &(ra * rb));
            let rhs = wigner_d(j, &ra) * wigner_d(j, &rb);
            prop_assert!((lhs - rhs).norm() < 1e-11);
            prop_assert!((wigner_d(j, &ra) - wigner_d_exp(j, &Vector3::from(a))).norm() < 1e-11);
        }

        #[test]
        fn d_matrices_are_unitary(phi in 0.0..TAU, theta in 0.0..PI, psi in 0.0..TAU, j in 0usize..8) {
            let d = wigner_d_euler(j, &EulerAngles { phi, theta, psi });
            let n = 2 * j + 1;
            prop_assert!((d.adjoint() * &d - DMatrix::<Complex64>::identity(n, n)).norm() < 1e-12);
        }
    }
}
