use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cltlab::{CltCheck, VerifySettings};
use crate::error::{Error, Result};
use crate::simulator::{NamedFunction, SimPlan};
use crate::spectral::{CoeffEntry, SpectralFunction, SuperOUConfig};

/// A named function as written in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub name: String,
    pub coeffs: Vec<CoeffEntry>,
}

/// Functions and time of the joint CLT check, by registered name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltConfig {
    pub f: String,
    pub h: String,
    pub g: String,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestsConfig {
    #[serde(default = "defaults::level")]
    pub level: f64,
    #[serde(default = "defaults::min_surviving")]
    pub min_surviving: usize,
    #[serde(default = "defaults::variance_band")]
    pub variance_band: f64,
    #[serde(default = "defaults::resamples")]
    pub bootstrap_resamples: usize,
    #[serde(default = "defaults::seed")]
    pub bootstrap_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clt: Option<CltConfig>,
    /// Pairs of function names for the covariance checks at the CLT time.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub covariance_pairs: Vec<[String; 2]>,
}

mod defaults {
    use crate::cltlab::VerifySettings;

    pub fn level() -> f64 {
        VerifySettings::default().level
    }
    pub fn min_surviving() -> usize {
        VerifySettings::default().min_surviving
    }
    pub fn variance_band() -> f64 {
        VerifySettings::default().variance_band
    }
    pub fn resamples() -> usize {
        VerifySettings::default().bootstrap_resamples
    }
    pub fn seed() -> u64 {
        VerifySettings::default().bootstrap_seed
    }
}

impl Default for TestsConfig {
    fn default() -> Self {
        let s = VerifySettings::default();
        Self {
            level: s.level,
            min_surviving: s.min_surviving,
            variance_band: s.variance_band,
            bootstrap_resamples: s.bootstrap_resamples,
            bootstrap_seed: s.bootstrap_seed,
            clt: None,
            covariance_pairs: Vec::new(),
        }
    }
}

impl TestsConfig {
    pub fn settings(&self) -> VerifySettings {
        VerifySettings {
            level: self.level,
            min_surviving: self.min_surviving,
            variance_band: self.variance_band,
            bootstrap_resamples: self.bootstrap_resamples,
            bootstrap_seed: self.bootstrap_seed,
        }
    }
}

/// Default output files per subcommand; stdout when absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: SuperOUConfig,
    #[serde(default)]
    pub functions: Vec<FunctionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimPlan>,
    #[serde(default)]
    pub tests: TestsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// The part of the config that determines results; output paths excluded.
#[derive(Serialize)]
struct DigestView<'a> {
    model: &'a SuperOUConfig,
    functions: &'a [FunctionEntry],
    sim: &'a Option<SimPlan>,
    tests: &'a TestsConfig,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, f) in self.functions.iter().enumerate() {
            if self.functions[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::Config(format!("function name {:?} is used twice", f.name)));
            }
            self.model.check_function(&SpectralFunction::from_entries(&f.coeffs))?;
        }
        self.tests.settings().validate()?;
        if let Some(c) = &self.tests.clt {
            for name in [&c.f, &c.h, &c.g] {
                self.function(name)?;
            }
            if !self.sim.as_ref().is_some_and(|s| s.checkpoints.contains(&c.t)) {
                return Err(Error::Config(format!("CLT time {} must be one of the simulation checkpoints", c.t)));
            }
        }
        for [a, b] in &self.tests.covariance_pairs {
            self.function(a)?;
            self.function(b)?;
        }
        if !self.tests.covariance_pairs.is_empty() && self.tests.clt.is_none() {
            return Err(Error::Config("covariance_pairs are evaluated at the CLT time; add tests.clt".into()));
        }
        if let Some(plan) = &self.sim {
            plan.validate(&self.model)?;
        }
        Ok(())
    }

    pub fn function(&self, name: &str) -> Result<SpectralFunction> {
        self.functions
            .iter()
            .find(|f| f.name == name)
            .map(|f| SpectralFunction::from_entries(&f.coeffs))
            .ok_or_else(|| Error::Config(format!("unknown function name {name:?}")))
    }

    pub fn named_functions(&self) -> Vec<NamedFunction> {
        self.functions
            .iter()
            .map(|f| NamedFunction::new(f.name.clone(), SpectralFunction::from_entries(&f.coeffs)))
            .collect()
    }

    pub fn plan(&self) -> Result<&SimPlan> {
        self.sim
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs a \"sim\" section".into()))
    }

    pub fn clt_check(&self) -> Result<Option<CltCheck>> {
        self.tests
            .clt
            .as_ref()
            .map(|c| {
                Ok(CltCheck {
                    f: self.function(&c.f)?,
                    h: self.function(&c.h)?,
                    g: self.function(&c.g)?,
                    t: c.t,
                })
            })
            .transpose()
    }

    pub fn covariance_pairs(&self) -> Result<Vec<(SpectralFunction, SpectralFunction)>> {
        self.tests
            .covariance_pairs
            .iter()
            .map(|[a, b]| Ok((self.function(a)?, self.function(b)?)))
            .collect()
    }

    /// Hex SHA-256 of the canonical JSON of everything except output paths.
    pub fn digest(&self) -> String {
        let view = DigestView {
            model: &self.model,
            functions: &self.functions,
            sim: &self.sim,
            tests: &self.tests,
        };
        let canonical = serde_json::to_string(&view).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
