//! Run configuration: one JSON document, overridden by command-line flags.

use crate::error::CliError;
use rotor_core::geometry::{BallResolution, InertiaTensor};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    pub ball: BallResolution,
    /// Degree of the Euler product grid used for SO(3) integrals.
    pub euler_degree: usize,
    /// Half-width of the flat part of the momentum taper; jmax + 2 when absent.
    pub momentum_flat: Option<usize>,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            ball: BallResolution::default(),
            euler_degree: 40,
            momentum_flat: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub curvature: f64,
    pub geometry: f64,
    pub trajectory: f64,
    pub drift: f64,
    pub haar: f64,
    /// Relative to ħ (first moments) or ħ² (second moments).
    pub moments: f64,
    /// Relative to ε₀.
    pub zero_point: f64,
    pub overlap: f64,
    pub coherence: f64,
    pub su2_volume: f64,
    pub su2_wigner: f64,
    pub su2_normalization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            curvature: 1e-6,
            geometry: 1e-5,
            trajectory: 1e-8,
            drift: 1e-9,
            haar: 1e-6,
            moments: 1e-4,
            zero_point: 1e-4,
            overlap: 1e-3,
            coherence: 1e-4,
            su2_volume: 1e-6,
            su2_wigner: 1e-8,
            su2_normalization: 1e-3,
        }
    }
}

/// Sample sizes of the `verify all` suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySizes {
    pub geometry_points: usize,
    pub basis_jmax: usize,
    pub random_states: usize,
    pub overlap_pairs: usize,
    pub limit_hbars: Vec<f64>,
    pub coherence_states: usize,
    pub coherence_points: usize,
    pub coherence_directions: usize,
    pub su2_angular_nodes: usize,
    pub su2_momentum_nodes: usize,
}

impl Default for VerifySizes {
    fn default() -> Self {
        Self {
            geometry_points: 200,
            basis_jmax: 4,
            random_states: 20,
            overlap_pairs: 10,
            limit_hbars: vec![1.0, 0.5, 0.25, 0.125],
            coherence_states: 3,
            coherence_points: 3,
            coherence_directions: 6,
            su2_angular_nodes: 16,
            su2_momentum_nodes: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub hbar: f64,
    pub inertia: [f64; 3],
    pub jmax: usize,
    pub seed: u64,
    pub grids: Grids,
    pub tolerances: Tolerances,
    pub verify: VerifySizes,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            inertia: [1.0, 2.0, 3.0],
            jmax: 3,
            seed: 7,
            grids: Grids::default(),
            tolerances: Tolerances::default(),
            verify: VerifySizes::default(),
            output_dir: PathBuf::from("rotor-out"),
        }
    }
}

/// Flag values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub hbar: Option<f64>,
    pub inertia: Option<[f64; 3]>,
    pub jmax: Option<usize>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = overrides.hbar {
            cfg.hbar = v;
        }
        if let Some(v) = overrides.inertia {
            cfg.inertia = v;
        }
        if let Some(v) = overrides.jmax {
            cfg.jmax = v;
        }
        if let Some(v) = overrides.seed {
            cfg.seed = v;
        }
        if let Some(v) = &overrides.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return bad(format!("hbar must be positive, got {}", self.hbar));
        }
        if let Err(e) = InertiaTensor::new(self.inertia[0], self.inertia[1], self.inertia[2]) {
            return bad(e.to_string());
        }
        let b = &self.grids.ball;
        if b.radial < 4 || b.polar < 4 || b.azimuthal < 4 {
            return bad(format!("gamma-ball resolution below 4 nodes per axis: {b:?}"));
        }
        if self.grids.euler_degree < 2 * self.jmax {
            return bad(format!("euler_degree {} is below 2 jmax = {}", self.grids.euler_degree, 2 * self.jmax));
        }
        if self.grids.momentum_flat == Some(0) {
            return bad("momentum_flat must be at least 1".into());
        }
        let t = serde_json::to_value(&self.tolerances).expect("tolerances serialize");
        for (name, v) in t.as_object().expect("tolerances form an object") {
            if !(v.as_f64().is_some_and(|x| x > 0.0)) {
                return bad(format!("tolerance {name} must be positive"));
            }
        }
        if self.verify.limit_hbars.iter().any(|h| !(*h > 0.0)) {
            return bad("limit_hbars must be positive".into());
        }
        if self.verify.su2_angular_nodes == 0 || self.verify.su2_momentum_nodes == 0 {
            return bad("su2 node counts must be positive".into());
        }
        Ok(())
    }

    pub fn inertia_tensor(&self) -> InertiaTensor {
        InertiaTensor::new(self.inertia[0], self.inertia[1], self.inertia[2]).expect("validated")
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form of the resolved configuration,
    /// without the output directory.
    pub fn hash(&self) -> String {
        let placed = RunConfig {
            output_dir: PathBuf::new(),
            ..self.clone()
        };
        let text = serde_json::to_string(&placed).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_hash_is_stable() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.hash(), RunConfig::default().hash());
        assert_eq!(c.hash().len(), 64);
        let mut d = c.clone();
        d.seed += 1;
        assert_ne!(c.hash(), d.hash());
        let e = RunConfig {
            output_dir: "elsewhere".into(),
            ..c.clone()
        };
        assert_eq!(c.hash(), e.hash());
    }

    #[test]
    fn overrides_apply_and_bad_values_are_rejected() {
        let o = Overrides {
            hbar: Some(0.5),
            jmax: Some(2),
            ..Default::default()
        };
        let c = RunConfig::load(None, &o).unwrap();
        assert_eq!((c.hbar, c.jmax), (0.5, 2));
        let o = Overrides {
            inertia: Some([1.0, -1.0, 2.0]),
            ..Default::default()
        };
        assert!(matches!(RunConfig::load(None, &o), Err(CliError::Config(_))));
    }

    #[test]
    fn partial_files_fill_in_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"hbar": 0.25, "grids": {"euler_degree": 12}}"#).unwrap();
        assert_eq!(c.hbar, 0.25);
        assert_eq!(c.grids.euler_degree, 12);
        assert_eq!(c.grids.ball, BallResolution::default());
        assert!(serde_json::from_str::<RunConfig>(r#"{"hbarr": 1}"#).is_err());
    }
}
