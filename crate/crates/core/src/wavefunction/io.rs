//! JSON state files: `{"hbar": .., "jmax": .., "coefficients": [{"j","m","k","re","im"}, ..]}`.

use super::WaveFunction;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub j: usize,
    pub m: i64,
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub hbar: f64,
    pub jmax: usize,
    pub coefficients: Vec<CoefficientRow>,
}

impl StateFile {
    /// Rows in (j, m, k) order; exact zeros are omitted.
    pub fn from_state(psi: &WaveFunction) -> Self {
        let mut coefficients = Vec::new();
        for (j, b) in psi.blocks().iter().enumerate() {
            let ji = j as i64;
            for m in -ji..=ji {
                for k in -ji..=ji {
                    let c = b[((m + ji) as usize, (k + ji) as usize)];
                    if c.re != 0.0 || c.im != 0.0 {
                        coefficients.push(CoefficientRow { j, m, k, re: c.re, im: c.im });
                    }
                }
            }
        }
        Self {
            hbar: psi.hbar(),
            jmax: psi.jmax(),
            coefficients,
        }
    }

    pub fn to_state(&self) -> Result<WaveFunction> {
        let mut psi = WaveFunction::zero(self.hbar, self.jmax)?;
        for row in &self.coefficients {
            if row.j > self.jmax {
                return Err(Error::InvalidState(format!("row j = {} exceeds jmax = {}", row.j, self.jmax)));
            }
            psi.set(row.j, row.m, row.k, Complex64::new(row.re, row.im))?;
        }
        Ok(psi)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidState(e.to_string()))
    }
}
