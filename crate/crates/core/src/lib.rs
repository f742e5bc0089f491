//! Geometry, dynamics and phase-space distributions of the quantum and
//! classical rigid rotator on T*SO(3).

pub mod dynamics;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod wavefunction;
pub mod distributions;
pub mod coherence;
pub mod su2;

#[cfg(test)]
pub(crate) mod test_support;

pub use error::{Error, Result};
