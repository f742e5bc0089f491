//! Classical and quantum phase-space distributions on T*SO(3).

pub mod action;
pub mod limit;
pub mod momentum;
pub mod wigner;

pub use action::{f0_expectation, f0_fourier, fle_residual, hj_residual, z_gradient, ActionWave};
pub use limit::{classical_limit_gap, LimitObservable, LimitRow};
pub use momentum::{fourier_momentum, MomentumGrid, Taper};
pub use wigner::{
    expect_h, expect_rho, expect_rho2, f_tilde, momentum_marginal, overlap, wigner_eval, ExpectationReport,
    FourierMoments, OverlapReport, WignerDistribution, WignerValue,
};
