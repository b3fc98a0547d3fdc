//! Period-specific hazard ratios.
//!
//! Follow-up `[0, c_m)` is split at the cutpoints `c_1 < ... < c_m` into
//! `[0, c_1), [c_1, c_2), ...`. Each period gets its own Cox fit on a
//! left-truncated risk set: subjects still under observation at the period
//! start, with events after the period end turned into censoring at the end.

use serde::Serialize;

use super::cox::{cox_fit, CoxData, CoxFit, Covariates, NewtonOptions};
use crate::data::Observation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Period {
    pub start: f64,
    pub end: f64,
    /// Subjects with `time >= start`.
    pub n_entering: usize,
    pub n_events: usize,
    pub fit: Option<CoxFit>,
    /// Why `fit` is absent, when it is.
    pub note: Option<String>,
}

impl Period {
    pub fn is_empty(&self) -> bool {
        self.n_events == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodFit {
    pub cutpoints: Vec<f64>,
    pub periods: Vec<Period>,
}

pub fn period_specific_cox(
    obs: &[Observation],
    covariates: Covariates,
    cutpoints: &[f64],
    opts: &NewtonOptions,
) -> Result<PeriodFit> {
    if cutpoints.is_empty() {
        return Err(Error::Domain("at least one cutpoint is required".into()));
    }
    if cutpoints[0] <= 0.0 || cutpoints.windows(2).any(|w| w[1] <= w[0]) || cutpoints.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("cutpoints must be positive, finite and strictly increasing".into()));
    }
    let mut start = 0.0;
    let mut periods = Vec::with_capacity(cutpoints.len());
    for &end in cutpoints {
        let window: Vec<Observation> = obs
            .iter()
            .filter(|o| o.time >= start)
            .map(|o| {
                if o.time < end {
                    *o
                } else {
                    Observation { time: end, event: false, ..*o }
                }
            })
            .collect();
        let n_events = window.iter().filter(|o| o.event).count();
        let (fit, note) = if n_events == 0 {
            (None, Some("no events in period".to_string()))
        } else {
            match CoxData::from_observations(&window, covariates).and_then(|d| cox_fit(&d, opts)) {
                Ok(fit) => (Some(fit), None),
                Err(e) => (None, Some(e.to_string())),
            }
        };
        periods.push(Period { start, end, n_entering: window.len(), n_events, fit, note });
        start = end;
    }
    Ok(PeriodFit { cutpoints: cutpoints.to_vec(), periods })
}
