use serde::Serialize;

use super::validate_sample;
use crate::error::{Error, Result};

/// Right-continuous step function estimated at the distinct event times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub variance: Vec<f64>,
    pub n_risk: Vec<usize>,
    pub n_event: Vec<usize>,
    /// Value before the first event time.
    pub initial: f64,
    /// Largest observed time, event or censored. The curve is defined up to here.
    pub max_time: f64,
}

impl StepCurve {
    pub fn value_at(&self, t: f64) -> f64 {
        // number of event times <= t
        let idx = self.times.partition_point(|x| *x <= t);
        if idx == 0 {
            self.initial
        } else {
            self.values[idx - 1]
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Exact area under the step function on `[0, horizon]`.
    pub fn area_to(&self, horizon: f64) -> Result<f64> {
        if horizon.is_nan() || horizon <= 0.0 {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        if horizon > self.max_time {
            return Err(Error::BeyondSupport { requested: horizon, max_supported: self.max_time });
        }
        let mut area = 0.0;
        let mut left = 0.0;
        let mut level = self.initial;
        for (t, v) in self.times.iter().zip(&self.values) {
            if *t >= horizon {
                break;
            }
            area += level * (t - left);
            left = *t;
            level = *v;
        }
        Ok(area + level * (horizon - left))
    }
}

/// `(time, n_risk, n_event)` at each distinct event time.
pub(crate) fn risk_table(times: &[f64], events: &[bool]) -> Vec<(f64, usize, usize)> {
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|a, b| times[*a].total_cmp(&times[*b]));
    let mut table = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let t = times[order[i]];
        let at_risk = order.len() - i;
        let mut d = 0;
        while i < order.len() && times[order[i]] == t {
            d += events[order[i]] as usize;
            i += 1;
        }
        if d > 0 {
            table.push((t, at_risk, d));
        }
    }
    table
}

/// Product-limit estimate of survival with Greenwood variance.
pub fn kaplan_meier(times: &[f64], events: &[bool]) -> Result<StepCurve> {
    validate_sample(times, events)?;
    let table = risk_table(times, events);
    let mut curve = empty_curve(times, &table, 1.0);
    let mut surv = 1.0;
    let mut greenwood = 0.0;
    for &(_, n, d) in &table {
        surv *= 1.0 - d as f64 / n as f64;
        if n > d {
            greenwood += d as f64 / (n as f64 * (n - d) as f64);
        }
        curve.values.push(surv);
        curve.variance.push(if surv > 0.0 { surv * surv * greenwood } else { 0.0 });
    }
    Ok(curve)
}

/// Cumulative hazard as the running sum of `d / n` at event times.
pub fn nelson_aalen(times: &[f64], events: &[bool]) -> Result<StepCurve> {
    validate_sample(times, events)?;
    let table = risk_table(times, events);
    let mut curve = empty_curve(times, &table, 0.0);
    let (mut cum, mut var) = (0.0, 0.0);
    for &(_, n, d) in &table {
        cum += d as f64 / n as f64;
        var += d as f64 / (n as f64 * n as f64);
        curve.values.push(cum);
        curve.variance.push(var);
    }
    Ok(curve)
}

pub(crate) fn empty_curve(times: &[f64], table: &[(f64, usize, usize)], initial: f64) -> StepCurve {
    StepCurve {
        times: table.iter().map(|r| r.0).collect(),
        values: Vec::with_capacity(table.len()),
        variance: Vec::with_capacity(table.len()),
        n_risk: table.iter().map(|r| r.1).collect(),
        n_event: table.iter().map(|r| r.2).collect(),
        initial,
        max_time: times.iter().copied().fold(0.0, f64::max),
    }
}
