//! Effect measures other than the hazard ratio, from either the closed-form
//! truth or Kaplan–Meier curves, plus the censoring-sensitivity experiment
//! for the Cox estimate.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{arm_sample, Observation};
use crate::error::{Error, Result};
use crate::estimators::{cox_fit, kaplan_meier, CoxData, Covariates, NewtonOptions, StepCurve};
use crate::frailty::{marginal_survival, Arm, TwoArmTruth};
use crate::sim::{apply_censoring, simulate, CensoringSpec, TrialConfig};

const REPLICATE_STREAM: u64 = 0x5eed_5eed;

/// Where survival curves come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Truth(TwoArmTruth),
    /// Kaplan–Meier estimates per arm.
    Estimated { control: StepCurve, research: StepCurve },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Truth,
    Estimated,
}

impl Source {
    pub fn from_observations(obs: &[Observation]) -> Result<Self> {
        let curve = |arm| {
            let (t, e) = arm_sample(obs, arm);
            kaplan_meier(&t, &e)
        };
        Ok(Source::Estimated { control: curve(Arm::Control)?, research: curve(Arm::Research)? })
    }

    pub fn kind(&self) -> SourceKind {
        match self {
            Source::Truth(_) => SourceKind::Truth,
            Source::Estimated { .. } => SourceKind::Estimated,
        }
    }

    /// Largest time at which both arms are defined.
    pub fn max_supported(&self) -> f64 {
        match self {
            Source::Truth(_) => f64::INFINITY,
            Source::Estimated { control, research } => control.max_time.min(research.max_time),
        }
    }

    fn check_time(&self, t: f64, what: &str) -> Result<()> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!("{what} must be positive, got {t}")));
        }
        if t > self.max_supported() {
            return Err(Error::BeyondSupport { requested: t, max_supported: self.max_supported() });
        }
        Ok(())
    }

    pub fn survival(&self, arm: Arm, t: f64) -> Result<f64> {
        match self {
            Source::Truth(truth) => marginal_survival(truth.arm(arm), t),
            Source::Estimated { control, research } => {
                let curve = if arm == Arm::Control { control } else { research };
                if t > curve.max_time {
                    return Err(Error::BeyondSupport { requested: t, max_supported: curve.max_time });
                }
                Ok(curve.value_at(t))
            }
        }
    }

    fn log_survival(&self, arm: Arm, t: f64) -> Result<f64> {
        match self {
            Source::Truth(truth) => truth.arm(arm).log_survival(t),
            Source::Estimated { .. } => self.survival(arm, t).map(f64::ln),
        }
    }

    fn restricted_mean(&self, arm: Arm, horizon: f64) -> Result<f64> {
        match self {
            Source::Truth(truth) => truth.arm(arm).restricted_mean(horizon),
            Source::Estimated { control, research } => {
                if arm == Arm::Control { control } else { research }.area_to(horizon)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArmValues {
    pub control: f64,
    pub research: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimandReport {
    pub name: String,
    pub source: SourceKind,
    /// Landmark time or restriction horizon.
    pub horizon: f64,
    pub value: f64,
    pub per_arm: ArmValues,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LandmarkKind {
    /// `S1 - S0`
    Difference,
    /// `S1 / S0`
    Ratio,
    /// `(1 - S1) - (1 - S0)`
    RiskDifference,
}

impl LandmarkKind {
    pub const ALL: [LandmarkKind; 3] = [LandmarkKind::Difference, LandmarkKind::Ratio, LandmarkKind::RiskDifference];

    fn name(self) -> &'static str {
        match self {
            LandmarkKind::Difference => "landmark_survival_difference",
            LandmarkKind::Ratio => "landmark_survival_ratio",
            LandmarkKind::RiskDifference => "landmark_risk_difference",
        }
    }
}

/// Research-versus-control contrast of survival probabilities at `t_star`.
/// Estimated curves are never extrapolated past the last observed time.
pub fn landmark_contrast(source: &Source, t_star: f64, kind: LandmarkKind) -> Result<EstimandReport> {
    source.check_time(t_star, "landmark time")?;
    let s0 = source.survival(Arm::Control, t_star)?;
    let s1 = source.survival(Arm::Research, t_star)?;
    let value = match kind {
        LandmarkKind::Difference => s1 - s0,
        LandmarkKind::Ratio => {
            if s0 == 0.0 {
                return Err(Error::Domain(format!("control survival is 0 at {t_star}; ratio undefined")));
            }
            s1 / s0
        }
        LandmarkKind::RiskDifference => (1.0 - s1) - (1.0 - s0),
    };
    Ok(EstimandReport {
        name: kind.name().into(),
        source: source.kind(),
        horizon: t_star,
        value,
        per_arm: ArmValues { control: s0, research: s1 },
    })
}

/// Restricted mean survival time of one arm up to `horizon`.
pub fn rmst(source: &Source, arm: Arm, horizon: f64) -> Result<EstimandReport> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    let value = source.restricted_mean(arm, horizon)?;
    let other = source.restricted_mean(other_arm(arm), horizon).unwrap_or(f64::NAN);
    let per_arm = match arm {
        Arm::Control => ArmValues { control: value, research: other },
        Arm::Research => ArmValues { control: other, research: value },
    };
    let name = match arm {
        Arm::Control => "rmst_control",
        Arm::Research => "rmst_research",
    };
    Ok(EstimandReport { name: name.into(), source: source.kind(), horizon, value, per_arm })
}

/// RMST of research minus RMST of control.
pub fn rmst_difference(source: &Source, horizon: f64) -> Result<EstimandReport> {
    source.check_time(horizon, "horizon")?;
    let control = source.restricted_mean(Arm::Control, horizon)?;
    let research = source.restricted_mean(Arm::Research, horizon)?;
    Ok(EstimandReport {
        name: "rmst_difference".into(),
        source: source.kind(),
        horizon,
        value: research - control,
        per_arm: ArmValues { control, research },
    })
}

fn other_arm(arm: Arm) -> Arm {
    match arm {
        Arm::Control => Arm::Research,
        Arm::Research => Arm::Control,
    }
}

/// `log S1(t) / log S0(t)`, equivalently the ratio of cumulative hazards.
/// Constant and equal to the hazard ratio under proportional hazards.
pub fn log_survival_ratio(source: &Source, t: f64) -> Result<EstimandReport> {
    source.check_time(t, "time")?;
    let l0 = source.log_survival(Arm::Control, t)?;
    let l1 = source.log_survival(Arm::Research, t)?;
    for (arm, l) in [("control", l0), ("research", l1)] {
        if l == 0.0 || !l.is_finite() {
            return Err(Error::Domain(format!(
                "{arm} survival at {t} is {}; log survival ratio needs survival strictly inside (0, 1)",
                l.exp()
            )));
        }
    }
    Ok(EstimandReport {
        name: "log_survival_ratio".into(),
        source: source.kind(),
        horizon: t,
        value: l1 / l0,
        per_arm: ArmValues { control: -l0, research: -l1 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub spec_label: String,
    pub mean_beta: f64,
    /// Standard error of `mean_beta` across replicates.
    pub mc_se: f64,
    pub n_ok: usize,
    pub n_failed: usize,
}

/// Seed for replicate `index`, a pure function of `(base, index)`.
pub fn replicate_seed(base: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(REPLICATE_STREAM);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

/// Monte-Carlo mean of the Cox estimate under each censoring spec.
///
/// Replicate `r` simulates potential times once from `replicate_seed(config.seed, r)`
/// and reuses them for every spec, so the rows differ only through censoring.
/// Fits that error or fail to converge are counted in `n_failed`.
pub fn censoring_sensitivity(
    config: &TrialConfig,
    specs: &[CensoringSpec],
    replicates: usize,
    covariates: Covariates,
) -> Result<Vec<SensitivityRow>> {
    if replicates < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 replicates, got {replicates}")));
    }
    if specs.is_empty() {
        return Err(Error::InvalidConfig("no censoring specs given".into()));
    }
    for spec in specs {
        spec.validate()?;
    }
    let base = TrialConfig { censoring: CensoringSpec::None, ..config.clone() };
    base.validate()?;
    let opts = NewtonOptions::default();

    // estimates[r][s]
    let estimates: Vec<Vec<Option<f64>>> = (0..replicates)
        .into_par_iter()
        .map(|r| -> Result<Vec<Option<f64>>> {
            let seed = replicate_seed(config.seed, r);
            let uncensored = simulate(&TrialConfig { seed, ..base.clone() })?;
            specs
                .iter()
                .map(|spec| {
                    let records = apply_censoring(uncensored.records.clone(), spec, seed)?;
                    let obs: Vec<Observation> = records.iter().map(Observation::from).collect();
                    Ok(CoxData::from_observations(&obs, covariates)
                        .and_then(|d| cox_fit(&d, &opts))
                        .ok()
                        .filter(|f| f.converged)
                        .map(|f| f.arm().log_hr))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    Ok(specs
        .iter()
        .enumerate()
        .map(|(s, spec)| {
            let ok: Vec<f64> = estimates.iter().filter_map(|row| row[s]).collect();
            let n = ok.len();
            let mean = ok.iter().sum::<f64>() / n as f64;
            let mc_se = if n >= 2 {
                let var = ok.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            } else {
                f64::NAN
            };
            SensitivityRow { spec_label: spec.label(), mean_beta: mean, mc_se, n_ok: n, n_failed: replicates - n }
        })
        .collect())
}
