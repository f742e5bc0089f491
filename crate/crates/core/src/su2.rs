//! Reduction of the Wigner transform on T*ℝ⁴ to T*SU(2), and the projection
//! to T*SO(3).
//!
//! Spherical coordinates on ℝ⁴:
//!
//! ```text
//! x₁ = r cos(θ/2) cos ν,  x₂ = r cos(θ/2) sin ν,
//! x₃ = r sin(θ/2) cos η,  x₄ = r sin(θ/2) sin η,
//! ```
//!
//! with scale factors (1, r/2, r cos(θ/2), r sin(θ/2)). The conjugate momenta
//! are p_q = h_q (P·e_q), so the lift (r, θ, ν, η, p) ↦ (X, P) is canonical
//! and |ω_e⁴| = d⁴X d⁴P.

use crate::error::{Error, Result};
use crate::geometry::quadrature::{gauss_hermite, gauss_legendre_on};
use crate::geometry::Rotation;
use nalgebra::{Matrix2, Matrix3, Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Volume of S³ under d⁴X restricted to r = 1.
pub const SU2_VOLUME: f64 = 2.0 * PI * PI;

const SPHERE_TOLERANCE: f64 = 1e-10;

fn wrap_tau(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct R4Point {
    pub x: Vector4<f64>,
}

impl R4Point {
    pub fn new(x: Vector4<f64>) -> Self {
        Self { x }
    }

    pub fn from_spherical(r: f64, theta: f64, nu: f64, eta: f64) -> Self {
        let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
        Self {
            x: Vector4::new(r * c * nu.cos(), r * c * nu.sin(), r * s * eta.cos(), r * s * eta.sin()),
        }
    }

    /// (r, θ, ν, η) with θ ∈ [0, π] and ν, η ∈ [0, 2π). Undefined angles
    /// (on the axes) are returned as 0.
    pub fn spherical(&self) -> (f64, f64, f64, f64) {
        let x = &self.x;
        let r = x.norm();
        let (a, b) = (x[0].hypot(x[1]), x[2].hypot(x[3]));
        let theta = 2.0 * b.atan2(a);
        let nu = if a > 0.0 { wrap_tau(x[1].atan2(x[0])) } else { 0.0 };
        let eta = if b > 0.0 { wrap_tau(x[3].atan2(x[2])) } else { 0.0 };
        (r, theta, nu, eta)
    }

    pub fn norm(&self) -> f64 {
        self.x.norm()
    }
}

/// Scale factors (h_r, h_θ, h_ν, h_η).
pub fn scale_factors(r: f64, theta: f64) -> [f64; 4] {
    [1.0, 0.5 * r, r * (0.5 * theta).cos(), r * (0.5 * theta).sin()]
}

/// Orthonormal frame (e_r, e_θ, e_ν, e_η) as the columns of a matrix.
pub fn spherical_frame(theta: f64, nu: f64, eta: f64) -> Matrix4<f64> {
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let (cn, sn, ce, se) = (nu.cos(), nu.sin(), eta.cos(), eta.sin());
    Matrix4::from_columns(&[
        Vector4::new(c * cn, c * sn, s * ce, s * se),
        Vector4::new(-s * cn, -s * sn, c * ce, c * se),
        Vector4::new(-sn, cn, 0.0, 0.0),
        Vector4::new(0.0, 0.0, -se, ce),
    ])
}

/// â_X = [[x₁ + ix₂, x₃ − ix₄], [−x₃ − ix₄, x₁ − ix₂]].
pub fn su2_from_point(p: &R4Point) -> Result<Matrix2<Complex64>> {
    let norm = p.norm();
    if (norm - 1.0).abs() > SPHERE_TOLERANCE {
        return Err(Error::NotOnSphere { norm });
    }
    let x = &p.x;
    Ok(Matrix2::new(
        Complex64::new(x[0], x[1]),
        Complex64::new(x[2], -x[3]),
        Complex64::new(-x[2], -x[3]),
        Complex64::new(x[0], -x[1]),
    ))
}

/// Image of U under the double cover, 𝓡ᵢⱼ = ½ tr(σᵢ U σⱼ U†).
pub fn su2_to_rotation(u: &Matrix2<Complex64>) -> Result<Rotation> {
    let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    let one = Complex64::new(1.0, 0.0);
    let sigma = [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ];
    let ud = u.adjoint();
    let m = Matrix3::from_fn(|a, b| 0.5 * (sigma[a] * u * sigma[b] * ud).trace().re);
    Rotation::from_matrix(m)
}

/// V_SU2 by Gauss–Legendre quadrature of sin θ / 4 over (θ, ν, η).
pub fn volume_su2(nodes: usize) -> Result<f64> {
    let (t, w) = gauss_legendre_on(nodes, 0.0, PI)?;
    let polar: f64 = t.iter().zip(&w).map(|(t, w)| w * t.sin()).sum();
    Ok(polar * TAU * TAU / 4.0)
}

/// ∫_{r ≤ R} d⁴X by quadrature; π²R⁴/2.
pub fn ball_volume(radius: f64, nodes: usize) -> Result<f64> {
    if radius < 0.0 {
        return Err(Error::Domain(format!("radius must be non-negative, got {radius}")));
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    let (r, w) = gauss_legendre_on(nodes, 0.0, radius)?;
    let radial: f64 = r.iter().zip(&w).map(|(r, w)| w * r.powi(3)).sum();
    Ok(radial * volume_su2(nodes)?)
}

/// Ψ_e(X) = (2πσ²)⁻¹ exp(−|X − X₀|²/4σ²) e^{iP₀·X/ħ}, normalized over d⁴X.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedState {
    pub x0: Vector4<f64>,
    pub p0: Vector4<f64>,
    pub sigma: f64,
    pub hbar: f64,
}

impl ExtendedState {
    pub fn gaussian(x0: Vector4<f64>, p0: Vector4<f64>, sigma: f64, hbar: f64) -> Result<Self> {
        if !(sigma > 0.0 && hbar > 0.0 && sigma.is_finite() && hbar.is_finite()) {
            return Err(Error::Domain(format!("sigma and hbar must be positive, got {sigma}, {hbar}")));
        }
        Ok(Self { x0, p0, sigma, hbar })
    }

    pub fn evaluate(&self, x: &Vector4<f64>) -> Complex64 {
        let amp = (-(x - self.x0).norm_squared() / (4.0 * self.sigma * self.sigma)).exp() / (2.0 * PI * self.sigma * self.sigma);
        Complex64::from_polar(amp, self.p0.dot(x) / self.hbar)
    }

    /// Closed-form Wigner function (πħ)⁻⁴ exp(−|X−X₀|²/2σ² − 2σ²|P−P₀|²/ħ²).
    pub fn wigner_closed_form(&self, x: &Vector4<f64>, p: &Vector4<f64>) -> f64 {
        let s2 = self.sigma * self.sigma;
        let e = -(x - self.x0).norm_squared() / (2.0 * s2) - 2.0 * s2 * (p - self.p0).norm_squared() / (self.hbar * self.hbar);
        e.exp() / (PI * self.hbar).powi(4)
    }

    /// |Ψ̃_e(P)|², the momentum marginal of f_e.
    pub fn momentum_density(&self, p: &Vector4<f64>) -> f64 {
        let a = 2.0 * self.sigma * self.sigma / (self.hbar * self.hbar);
        (a / PI).powi(2) * (-a * (p - self.p0).norm_squared()).exp()
    }

    /// Momentum standard deviation per Cartesian component, ħ/2σ.
    pub fn momentum_width(&self) -> f64 {
        self.hbar / (2.0 * self.sigma)
    }
}

/// f_e(X, P) = (2π)⁻⁴ ∫ d⁴K e^{−iK·P} Ψ_e(X + ħK/2) Ψ_e*(X − ħK/2) by a
/// tensor Gauss–Hermite rule with `nodes` points per axis.
///
/// The rule is scaled to the envelope e^{−ħ²K²/8σ²} of the state and
/// shifted by the carrier P₀, so the remaining integrand oscillates at
/// √8σ|P − P₀|/ħ per axis. Rates beyond √(2·nodes) are rejected.
pub fn extended_wigner(state: &ExtendedState, x: &Vector4<f64>, p: &Vector4<f64>, nodes: usize) -> Result<f64> {
    let scale = 8f64.sqrt() * state.sigma / state.hbar;
    let bound = (2.0 * nodes as f64).sqrt();
    let ratio = scale * (p - state.p0).amax();
    if ratio > bound {
        return Err(Error::UnderResolved { ratio, bound });
    }
    let (u, w) = gauss_hermite(nodes)?;
    let half = 0.5 * state.hbar * scale;
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..nodes {
        for b in 0..nodes {
            for c in 0..nodes {
                for d in 0..nodes {
                    let k = Vector4::new(u[a], u[b], u[c], u[d]);
                    let weight = w[a] * w[b] * w[c] * w[d] * k.norm_squared().exp();
                    let shift = k * half;
                    let f = state.evaluate(&(x + shift)) * state.evaluate(&(x - shift)).conj();
                    total += f * Complex64::from_polar(weight, -scale * k.dot(p));
                }
            }
        }
    }
    Ok(total.re * (scale / TAU).powi(4))
}

/// A point (θ, ν, η, p_θ, p_ν, p_η) of T*SU(2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub theta: f64,
    pub nu: f64,
    pub eta: f64,
    pub p_theta: f64,
    pub p_nu: f64,
    pub p_eta: f64,
}

impl ReducedPoint {
    /// The point over the antipode −X, which has the same image in SO(3).
    pub fn antipode(&self) -> Self {
        Self {
            nu: wrap_tau(self.nu + PI),
            eta: wrap_tau(self.eta + PI),
            ..*self
        }
    }
}

/// (X, P) for the reduced point at radius r and radial momentum p_r.
pub fn lift(q: &ReducedPoint, r: f64, p_r: f64) -> Result<(Vector4<f64>, Vector4<f64>)> {
    let h = scale_factors(r, q.theta);
    if h[1..].iter().any(|v| v.abs() < 1e-12) {
        return Err(Error::Domain(format!("spherical chart degenerates at r = {r}, theta = {}", q.theta)));
    }
    let frame = spherical_frame(q.theta, q.nu, q.eta);
    let x = frame.column(0) * r;
    let comps = Vector4::new(p_r, q.p_theta / h[1], q.p_nu / h[2], q.p_eta / h[3]);
    Ok((x, frame * comps))
}

/// Where f_e comes from inside the reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WignerSource {
    #[default]
    ClosedForm,
    /// [`extended_wigner`] with the given number of nodes per axis.
    Quadrature(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionOptions {
    /// Gauss–Legendre nodes on the radial window.
    pub radial_nodes: usize,
    /// Radial window [max(0, 1 − wσ), 1 + wσ] in units of σ.
    pub radial_width: f64,
    /// Gauss–Hermite nodes for p_r.
    pub radial_momentum_nodes: usize,
    pub source: WignerSource,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self {
            radial_nodes: 24,
            radial_width: 6.0,
            radial_momentum_nodes: 2,
            source: WignerSource::ClosedForm,
        }
    }
}

/// f_SU2(q) = ∫₀^∞ dr ∫ dp_r f_e(X, P).
///
/// The p_r rule is Gauss–Hermite centred on P₀·e_r with scale ħ/(√2σ).
/// For the Gaussian packet f_e is exactly that Gaussian in p_r at fixed X,
/// so a low node count is already exact.
pub fn reduce_to_su2(state: &ExtendedState, q: &ReducedPoint, opts: &ReductionOptions) -> Result<f64> {
    let lo = (1.0 - opts.radial_width * state.sigma).max(0.0);
    let hi = 1.0 + opts.radial_width * state.sigma;
    let (rs, wr) = gauss_legendre_on(opts.radial_nodes, lo, hi)?;
    let (us, wu) = gauss_hermite(opts.radial_momentum_nodes)?;
    let scale = state.hbar / (2f64.sqrt() * state.sigma);
    let e_r = spherical_frame(q.theta, q.nu, q.eta).column(0).into_owned();
    let center = state.p0.dot(&e_r);
    let mut total = 0.0;
    for (r, w1) in rs.iter().zip(&wr) {
        for (u, w2) in us.iter().zip(&wu) {
            let (x, p) = lift(q, *r, center + scale * u)?;
            let f = match opts.source {
                WignerSource::ClosedForm => state.wigner_closed_form(&x, &p),
                WignerSource::Quadrature(n) => extended_wigner(state, &x, &p, n)?,
            };
            total += w1 * w2 * u.powi(2).exp() * scale * f;
        }
    }
    Ok(total)
}

/// A point (θ, φ, ψ, p_θ, p_φ, p_ψ) of T*SO(3) in Euler coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct So3Point {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
    pub p_theta: f64,
    pub p_phi: f64,
    pub p_psi: f64,
}

/// φ = ν + η, ψ = ν − η, p_φ = (p_ν + p_η)/2, p_ψ = (p_ν − p_η)/2.
pub fn project_to_so3(q: &ReducedPoint) -> So3Point {
    So3Point {
        theta: q.theta,
        phi: wrap_tau(q.nu + q.eta),
        psi: wrap_tau(q.nu - q.eta),
        p_theta: q.p_theta,
        p_phi: 0.5 * (q.p_nu + q.p_eta),
        p_psi: 0.5 * (q.p_nu - q.p_eta),
    }
}

/// Both points of T*SU(2) over an SO(3) point.
pub fn su2_preimages(s: &So3Point) -> [ReducedPoint; 2] {
    let q = ReducedPoint {
        theta: s.theta,
        nu: wrap_tau(0.5 * (s.phi + s.psi)),
        eta: wrap_tau(0.5 * (s.phi - s.psi)),
        p_theta: s.p_theta,
        p_nu: s.p_phi + s.p_psi,
        p_eta: s.p_phi - s.p_psi,
    };
    [q, q.antipode()]
}

/// Matrix of the linear map (ν, η, p_ν, p_η) ↦ (φ, ψ, p_φ, p_ψ).
pub fn projection_jacobian() -> Matrix4<f64> {
    Matrix4::new(
        1.0, 1.0, 0.0, 0.0, //
        1.0, -1.0, 0.0, 0.0, //
        0.0, 0.0, 0.5, 0.5, //
        0.0, 0.0, 0.5, -0.5,
    )
}

/// Configuration volume bookkeeping between S³ and the Euler chart of SO(3).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeBookkeeping {
    /// Volume of S³ under d⁴X at r = 1.
    pub su2_volume: f64,
    /// Sheets of the cover S³ → SO(3).
    pub cover_factor: f64,
    /// sin θ dθ dφ dψ per unit of d⁴X at r = 1.
    pub measure_ratio: f64,
}

impl Default for VolumeBookkeeping {
    fn default() -> Self {
        Self {
            su2_volume: SU2_VOLUME,
            cover_factor: 2.0,
            measure_ratio: 8.0,
        }
    }
}

impl VolumeBookkeeping {
    pub fn so3_volume(&self) -> f64 {
        self.su2_volume / self.cover_factor * self.measure_ratio
    }
}

/// f_SO3 as the sum of f_SU2 over both preimages; the density is taken
/// with respect to dθ dφ dψ dp_θ dp_φ dp_ψ on φ, ψ ∈ [0, 2π).
pub fn f_so3(state: &ExtendedState, s: &So3Point, opts: &ReductionOptions) -> Result<f64> {
    let [a, b] = su2_preimages(s);
    Ok(reduce_to_su2(state, &a, opts)? + reduce_to_su2(state, &b, opts)?)
}

/// Quadrature settings for the six-dimensional reduced integrals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceRule {
    /// Gauss–Legendre nodes per angle.
    pub angular_nodes: usize,
    /// Angular half-window in units of σ along each arc.
    pub angular_width: f64,
    /// Gauss–Hermite nodes per reduced momentum.
    pub momentum_nodes: usize,
}

impl Default for PhaseSpaceRule {
    fn default() -> Self {
        Self {
            angular_nodes: 16,
            angular_width: 6.0,
            momentum_nodes: 6,
        }
    }
}

/// Angular windows around the centre of a packet that sits near the unit
/// sphere away from the poles θ = 0, π.
fn angular_windows(state: &ExtendedState, rule: &PhaseSpaceRule) -> Result<[(f64, f64); 3]> {
    let (r0, t0, n0, e0) = R4Point::new(state.x0).spherical();
    let arc = (rule.angular_width * state.sigma / r0).min(1.0).asin();
    let h = scale_factors(1.0, t0);
    let tw = 2.0 * arc;
    if t0 - tw <= 0.0 || t0 + tw >= PI {
        return Err(Error::Domain(format!("packet centred at theta = {t0} overlaps a pole of the chart")));
    }
    Ok([
        (t0 - tw, t0 + tw),
        (n0 - (arc / h[2]).min(PI), n0 + (arc / h[2]).min(PI)),
        (e0 - (arc / h[3]).min(PI), e0 + (arc / h[3]).min(PI)),
    ])
}

/// ∫ g dθ dν dη dp_θ dp_ν dp_η over the angular window of the packet.
///
/// Each momentum rule is Gauss–Hermite, centred at h_q P₀·e_q and scaled by
/// h_q ħ/(√2σ) with the scale factors taken at r = 1.
fn integrate_window(
    state: &ExtendedState,
    rule: &PhaseSpaceRule,
    g: impl Fn(&ReducedPoint) -> Result<f64> + Sync,
) -> Result<f64> {
    let [(ta, tb), (na, nb), (ea, eb)] = angular_windows(state, rule)?;
    let (ts, wt) = gauss_legendre_on(rule.angular_nodes, ta, tb)?;
    let (ns, wn) = gauss_legendre_on(rule.angular_nodes, na, nb)?;
    let (es, we) = gauss_legendre_on(rule.angular_nodes, ea, eb)?;
    let (us, wu) = gauss_hermite(rule.momentum_nodes)?;
    let scale = state.hbar / (2f64.sqrt() * state.sigma);
    let mut cells = Vec::with_capacity(ts.len() * ns.len() * es.len());
    for (i, t) in ts.iter().enumerate() {
        for (j, n) in ns.iter().enumerate() {
            for (k, e) in es.iter().enumerate() {
                cells.push((*t, *n, *e, wt[i] * wn[j] * we[k]));
            }
        }
    }
    let parts: Vec<Result<f64>> = cells
        .par_iter()
        .map(|&(theta, nu, eta, w)| {
            let h = scale_factors(1.0, theta);
            let frame = spherical_frame(theta, nu, eta);
            let centers: [f64; 3] = std::array::from_fn(|q| h[q + 1] * state.p0.dot(&frame.column(q + 1)));
            let scales: [f64; 3] = std::array::from_fn(|q| h[q + 1] * scale);
            let mut acc = 0.0;
            for (a, wa) in us.iter().zip(&wu) {
                for (b, wb) in us.iter().zip(&wu) {
                    for (c, wc) in us.iter().zip(&wu) {
                        let q = ReducedPoint {
                            theta,
                            nu,
                            eta,
                            p_theta: centers[0] + scales[0] * a,
                            p_nu: centers[1] + scales[1] * b,
                            p_eta: centers[2] + scales[2] * c,
                        };
                        acc += wa * wb * wc * (a * a + b * b + c * c).exp() * g(&q)?;
                    }
                }
            }
            Ok(acc * w * scales.iter().product::<f64>())
        })
        .collect();
    parts.into_iter().sum()
}

/// ∫ f_SU2 dθ dν dη dp_θ dp_ν dp_η over the angular window of the packet.
pub fn su2_total_probability(state: &ExtendedState, opts: &ReductionOptions, rule: &PhaseSpaceRule) -> Result<f64> {
    integrate_window(state, rule, |q| reduce_to_su2(state, q, opts))
}

/// ∫ f_SO3 dθ dφ dψ dp_θ dp_φ dp_ψ over the image of the packet window.
///
/// The window is swept in (ν, η, p_ν, p_η) and each sample is pushed
/// through the projection, so the integrand carries the absolute
/// Jacobian determinants of the configuration and momentum blocks.
pub fn so3_total_probability(state: &ExtendedState, opts: &ReductionOptions, rule: &PhaseSpaceRule) -> Result<f64> {
    let jac = projection_jacobian();
    let config = jac.fixed_view::<2, 2>(0, 0).determinant().abs();
    let momentum = jac.fixed_view::<2, 2>(2, 2).determinant().abs();
    integrate_window(state, rule, |q| Ok(f_so3(state, &project_to_so3(q), opts)? * config * momentum))
}

/// sup |f_SU2(q) − f_SU2(q̄)| / sup |f_SU2| over `points`, where q̄ is the
/// antipodal point. Zero when f_SU2 descends to a single-valued function
/// of the Euler angles.
pub fn periodicity_residual(state: &ExtendedState, points: &[ReducedPoint], opts: &ReductionOptions) -> Result<f64> {
    let (mut diff, mut size) = (0.0f64, 0.0f64);
    for q in points {
        let (a, b) = (reduce_to_su2(state, q, opts)?, reduce_to_su2(state, &q.antipode(), opts)?);
        diff = diff.max((a - b).abs());
        size = size.max(a.abs()).max(b.abs());
    }
    Ok(if size > 0.0 { diff / size } else { 0.0 })
}
