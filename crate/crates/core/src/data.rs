use serde::Serialize;

use crate::frailty::Arm;
use crate::sim::{Dataset, IndividualRecord};

/// What an analyst sees for one subject: arm, (optionally) the latent
/// stratum, the possibly censored time and the event flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observation {
    pub id: u64,
    pub arm: Arm,
    pub stratum: Option<usize>,
    pub time: f64,
    pub event: bool,
}

impl From<&IndividualRecord> for Observation {
    fn from(r: &IndividualRecord) -> Self {
        Self { id: r.id, arm: r.arm, stratum: Some(r.stratum), time: r.observed_time, event: r.event }
    }
}

impl Dataset {
    pub fn observations(&self) -> Vec<Observation> {
        self.records.iter().map(Observation::from).collect()
    }
}

/// Times and event flags of one arm.
pub fn arm_sample(obs: &[Observation], arm: Arm) -> (Vec<f64>, Vec<bool>) {
    obs.iter().filter(|o| o.arm == arm).map(|o| (o.time, o.event)).unzip()
}
