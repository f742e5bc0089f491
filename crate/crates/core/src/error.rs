use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The Euler chart degenerates (sin θ ≈ 0) at the requested point.
    #[error("singular Euler chart: sin(theta) = {sin_theta:.3e}")]
    SingularChart { sin_theta: f64 },

    #[error("matrix is not a rotation: orthogonality defect {defect:.3e}, det {det}")]
    NotARotation { defect: f64, det: f64 },

    #[error("invalid resolution: {0}")]
    InvalidResolution(String),

    #[error("moments of inertia must be strictly positive, got {0:?}")]
    InvalidInertia([f64; 3]),

    #[error("integration step too large: |rho| dt / min(I) = {ratio:.3} exceeds 0.5")]
    StepTooLarge { ratio: f64 },

    #[error("hbar mismatch: {left} vs {right}")]
    HbarMismatch { left: f64, right: f64 },

    #[error("truncation loss {loss:.3e} exceeds bound {bound:.3e}")]
    TruncationLossExceeded { loss: f64, bound: f64 },

    #[error("density is not normalized: integral = {integral}")]
    NotNormalized { integral: f64 },

    #[error("argument outside domain: {0}")]
    Domain(String),

    /// The quadrature grid is too coarse for the oscillation scale of the integrand.
    #[error("under-resolved quadrature: ratio {ratio:.3} exceeds bound {bound:.3}")]
    UnderResolved { ratio: f64, bound: f64 },

    #[error("point is not on the unit sphere S^3: |x| = {norm}")]
    NotOnSphere { norm: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
