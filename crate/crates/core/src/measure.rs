use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point mass `mass · δ_point`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub point: Vec<f64>,
    pub mass: f64,
}

/// A finite nonnegative combination of point masses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InitialMeasure {
    pub atoms: Vec<Atom>,
}

impl InitialMeasure {
    pub fn dirac(point: Vec<f64>, mass: f64) -> Self {
        Self { atoms: vec![Atom { point, mass }] }
    }

    /// ‖μ‖
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        for a in &self.atoms {
            if !(a.mass.is_finite() && a.mass >= 0.0) {
                return Err(Error::Input(format!("atom mass must be finite and nonnegative, got {}", a.mass)));
            }
            if a.point.len() != dim {
                return Err(Error::Input(format!(
                    "atom at {:?} has {} coordinates, model dimension is {dim}",
                    a.point,
                    a.point.len()
                )));
            }
            if a.point.iter().any(|v| !v.is_finite()) {
                return Err(Error::Input(format!("atom at {:?} is not finite", a.point)));
            }
        }
        Ok(())
    }
}
