//! TOML run configuration. Unknown keys are rejected.

use std::path::PathBuf;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::estimators::Covariates;
use crate::frailty::{uniform_grid, MixtureArm, TwoArmTruth};
use crate::sim::{CensoringSpec, Coupling, TrialConfig};

/// The two-stratum scenario: equal strata, control rates 0.1/0.5, research 0.05/0.25.
pub const TWO_STRATUM_TOML: &str = include_str!("../configs/two_stratum.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    output_dir: Option<PathBuf>,
    truth: RawTruth,
    #[serde(default)]
    trial: RawTrial,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    fit: RawFit,
    #[serde(default)]
    estimands: RawEstimands,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTruth {
    control: RawArm,
    research: RawArm,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArm {
    weights: Vec<f64>,
    rates: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrial {
    #[serde(default = "default_n")]
    n_per_arm: usize,
    #[serde(default)]
    coupling: Coupling,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    censoring: RawCensoring,
}

impl Default for RawTrial {
    fn default() -> Self {
        Self { n_per_arm: default_n(), coupling: Coupling::default(), seed: 0, censoring: RawCensoring::default() }
    }
}

fn default_n() -> usize {
    500
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum CensoringKind {
    #[default]
    None,
    Administrative,
    Exponential,
    Both,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCensoring {
    #[serde(default)]
    kind: CensoringKind,
    admin_time: Option<f64>,
    rate: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    min: f64,
    max: f64,
    points: usize,
}

impl Default for RawGrid {
    fn default() -> Self {
        Self { min: 0.0, max: 30.0, points: 601 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFit {
    covariates: Option<String>,
    cutpoints: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEstimands {
    landmark: Option<f64>,
    rmst: Option<f64>,
    sensitivity: Option<Vec<String>>,
    replicates: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn times(&self) -> Result<Vec<f64>> {
        uniform_grid(self.min, self.max, self.points)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimandBundle {
    pub landmark: Option<f64>,
    pub rmst: Option<f64>,
    pub sensitivity: Vec<CensoringSpec>,
    pub replicates: usize,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub output_dir: Option<PathBuf>,
    pub trial: TrialConfig,
    pub grid: GridSpec,
    pub covariates: Covariates,
    pub cutpoints: Option<Vec<f64>>,
    pub estimands: EstimandBundle,
}

impl RunConfig {
    pub fn two_stratum() -> Self {
        Self::from_toml(TWO_STRATUM_TOML).expect("shipped config is valid")
    }

    pub fn truth(&self) -> &TwoArmTruth {
        &self.trial.truth
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let field = |path: &str, e: Error| Error::InvalidConfig(format!("{path}: {e}"));

        let arm = |path: &str, a: RawArm| MixtureArm::new(a.weights, a.rates).map_err(|e| field(path, e));
        let truth = TwoArmTruth::new(arm("truth.control", raw.truth.control)?, arm("truth.research", raw.truth.research)?);

        let c = raw.trial.censoring;
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidConfig(format!("trial.censoring.{name} is required for kind {:?}", c.kind)))
        };
        let forbid = |v: Option<f64>, name: &str| match v {
            Some(_) => Err(Error::InvalidConfig(format!("trial.censoring.{name} is not used by kind {:?}", c.kind))),
            None => Ok(()),
        };
        let censoring = match c.kind {
            CensoringKind::None => {
                forbid(c.admin_time, "admin_time")?;
                forbid(c.rate, "rate")?;
                CensoringSpec::None
            }
            CensoringKind::Administrative => {
                forbid(c.rate, "rate")?;
                CensoringSpec::Administrative { admin_time: need(c.admin_time, "admin_time")? }
            }
            CensoringKind::Exponential => {
                forbid(c.admin_time, "admin_time")?;
                CensoringSpec::Exponential { rate: need(c.rate, "rate")? }
            }
            CensoringKind::Both => {
                CensoringSpec::Both { admin_time: need(c.admin_time, "admin_time")?, rate: need(c.rate, "rate")? }
            }
        };
        censoring.validate().map_err(|e| field("trial.censoring", e))?;
        let trial = TrialConfig {
            truth,
            n_per_arm: raw.trial.n_per_arm,
            coupling: raw.trial.coupling,
            censoring,
            seed: raw.trial.seed,
        };
        if trial.n_per_arm == 0 {
            return Err(Error::InvalidConfig("trial.n_per_arm: must be at least 1".into()));
        }

        let grid = GridSpec { min: raw.grid.min, max: raw.grid.max, points: raw.grid.points };
        grid.times().map_err(|e| field("grid", e))?;

        let covariates = match raw.fit.covariates {
            Some(s) => s.parse().map_err(|e| field("fit.covariates", e))?,
            None => Covariates::Arm,
        };

        let sensitivity = raw
            .estimands
            .sensitivity
            .unwrap_or_default()
            .iter()
            .map(|s| s.parse::<CensoringSpec>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| field("estimands.sensitivity", e))?;
        let estimands = EstimandBundle {
            landmark: raw.estimands.landmark,
            rmst: raw.estimands.rmst,
            sensitivity,
            replicates: raw.estimands.replicates.unwrap_or(200),
        };

        Ok(Self { output_dir: raw.output_dir, trial, grid, covariates, cutpoints: raw.fit.cutpoints, estimands })
    }
}
