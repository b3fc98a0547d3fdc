//! Simulation of an idealised two-arm randomised trial.
//!
//! Every individual carries a latent stratum and a pair of potential event
//! times, one per arm. Only the time under the assigned arm is observed, and
//! only up to censoring. Random numbers come from ChaCha8 substreams keyed by
//! `(seed, id)`, so generation order (and thread count) does not matter.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frailty::{Arm, TwoArmTruth};

const CENSORING_STREAM_BIT: u64 = 1 << 63;

/// How the two potential event times of one individual are tied together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// Separate uniforms for `T(0)` and `T(1)`.
    Independent,
    /// One shared uniform, so both times have the same rank within a stratum.
    #[default]
    Comonotone,
}

/// Right-censoring mechanism applied to the assigned arm's event time.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CensoringSpec {
    #[default]
    None,
    Administrative { admin_time: f64 },
    Exponential { rate: f64 },
    Both { admin_time: f64, rate: f64 },
}

impl CensoringSpec {
    pub fn validate(&self) -> Result<()> {
        let check_admin = |c: f64| {
            if c.is_finite() && c > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("administrative censoring time must be positive, got {c}")))
            }
        };
        let check_rate = |r: f64| {
            if r.is_finite() && r > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("censoring rate must be positive, got {r}")))
            }
        };
        match *self {
            CensoringSpec::None => Ok(()),
            CensoringSpec::Administrative { admin_time } => check_admin(admin_time),
            CensoringSpec::Exponential { rate } => check_rate(rate),
            CensoringSpec::Both { admin_time, rate } => check_admin(admin_time).and(check_rate(rate)),
        }
    }

    /// Compact label: `none`, `admin:2`, `exp:0.1`, `both:2:0.1`.
    pub fn label(&self) -> String {
        match *self {
            CensoringSpec::None => "none".into(),
            CensoringSpec::Administrative { admin_time } => format!("admin:{admin_time}"),
            CensoringSpec::Exponential { rate } => format!("exp:{rate}"),
            CensoringSpec::Both { admin_time, rate } => format!("both:{admin_time}:{rate}"),
        }
    }

    fn admin_time(&self) -> Option<f64> {
        match *self {
            CensoringSpec::Administrative { admin_time } | CensoringSpec::Both { admin_time, .. } => Some(admin_time),
            _ => None,
        }
    }

    fn rate(&self) -> Option<f64> {
        match *self {
            CensoringSpec::Exponential { rate } | CensoringSpec::Both { rate, .. } => Some(rate),
            _ => None,
        }
    }
}

impl std::str::FromStr for CensoringSpec {
    type Err = Error;

    /// Inverse of [`CensoringSpec::label`]; also accepts `administrative:` and `exponential:`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad number {p:?} in censoring spec {s:?}")))
        };
        let spec = match parts.as_slice() {
            ["none"] => CensoringSpec::None,
            ["admin" | "administrative", c] => CensoringSpec::Administrative { admin_time: num(c)? },
            ["exp" | "exponential", r] => CensoringSpec::Exponential { rate: num(r)? },
            ["both", c, r] => CensoringSpec::Both { admin_time: num(c)?, rate: num(r)? },
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unrecognised censoring spec {s:?} (expected none, admin:<t>, exp:<rate> or both:<t>:<rate>)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    pub truth: TwoArmTruth,
    pub n_per_arm: usize,
    pub coupling: Coupling,
    pub censoring: CensoringSpec,
    pub seed: u64,
}

impl TrialConfig {
    /// 500 per arm, comonotone coupling, no censoring.
    pub fn new(truth: TwoArmTruth, seed: u64) -> Self {
        Self { truth, n_per_arm: 500, coupling: Coupling::default(), censoring: CensoringSpec::None, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_per_arm == 0 {
            return Err(Error::InvalidConfig("n_per_arm must be at least 1".into()));
        }
        self.censoring.validate()?;
        let (c, r) = (&self.truth.control, &self.truth.research);
        if c.components() != r.components() {
            return Err(Error::InvalidConfig(format!(
                "simulation needs the same strata in both arms: control has {}, research has {}",
                c.components(),
                r.components()
            )));
        }
        if c.weights().iter().zip(r.weights()).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(Error::InvalidConfig(
                "simulation needs identical stratum weights in both arms (strata are baseline characteristics)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndividualRecord {
    pub id: u64,
    pub arm: Arm,
    pub stratum: usize,
    pub potential_time_0: f64,
    pub potential_time_1: f64,
    pub observed_time: f64,
    pub event: bool,
}

impl IndividualRecord {
    pub fn potential_time(&self, arm: Arm) -> f64 {
        match arm {
            Arm::Control => self.potential_time_0,
            Arm::Research => self.potential_time_1,
        }
    }

    pub fn assigned_time(&self) -> f64 {
        self.potential_time(self.arm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub records: Vec<IndividualRecord>,
    pub config: TrialConfig,
}

impl Dataset {
    pub fn arm_records(&self, arm: Arm) -> impl Iterator<Item = &IndividualRecord> {
        self.records.iter().filter(move |r| r.arm == arm)
    }
}

fn individual_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_stratum(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return k;
        }
    }
    weights.len() - 1
}

/// Draws the trial: `n_per_arm` control subjects (ids `1..=n`) followed by
/// `n_per_arm` research subjects, then applies the configured censoring.
pub fn simulate(config: &TrialConfig) -> Result<Dataset> {
    config.validate()?;
    let truth = &config.truth;
    let weights = truth.control.weights();
    let n = config.n_per_arm as u64;
    let records: Vec<IndividualRecord> = (1..=2 * n)
        .into_par_iter()
        .map(|id| {
            let mut rng = individual_rng(config.seed, id);
            let stratum = draw_stratum(weights, rng.random::<f64>());
            let u0: f64 = Open01.sample(&mut rng);
            let u1: f64 = match config.coupling {
                Coupling::Comonotone => u0,
                Coupling::Independent => Open01.sample(&mut rng),
            };
            let t0 = -u0.ln() / truth.control.rates()[stratum];
            let t1 = -u1.ln() / truth.research.rates()[stratum];
            let arm = if id <= n { Arm::Control } else { Arm::Research };
            let assigned = if arm == Arm::Control { t0 } else { t1 };
            IndividualRecord {
                id,
                arm,
                stratum,
                potential_time_0: t0,
                potential_time_1: t1,
                observed_time: assigned,
                event: true,
            }
        })
        .collect();
    let records = apply_censoring(records, &config.censoring, config.seed)?;
    Ok(Dataset { records, config: config.clone() })
}

/// Resets each record's observed time and event flag from its assigned
/// potential time and `spec`. Exponential censoring times come from a
/// per-record substream of `seed`, disjoint from the event-time streams.
pub fn apply_censoring(
    mut records: Vec<IndividualRecord>,
    spec: &CensoringSpec,
    seed: u64,
) -> Result<Vec<IndividualRecord>> {
    spec.validate()?;
    records.par_iter_mut().for_each(|r| {
        let t = r.assigned_time();
        let mut censor = spec.admin_time().unwrap_or(f64::INFINITY);
        if let Some(rate) = spec.rate() {
            let mut rng = individual_rng(seed, r.id | CENSORING_STREAM_BIT);
            let u: f64 = Open01.sample(&mut rng);
            censor = censor.min(-u.ln() / rate);
        }
        if t <= censor {
            r.observed_time = t;
            r.event = true;
        } else {
            r.observed_time = censor;
            r.event = false;
        }
    });
    Ok(records)
}
