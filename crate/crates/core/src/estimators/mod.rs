//! Kaplan–Meier, Nelson–Aalen, Cox partial likelihood and Breslow baseline.

mod cox;
mod nonparametric;
mod period;

pub use cox::{
    breslow_baseline, breslow_cumulative_hazard, cox_fit, log_partial_likelihood, CoxData, CoxFit, CoxTerm,
    Covariates, NewtonOptions, PartialLikelihood,
};
pub use nonparametric::{kaplan_meier, nelson_aalen, StepCurve};
pub use period::{period_specific_cox, Period, PeriodFit};

use crate::error::{Error, Result};

pub(crate) fn validate_sample(times: &[f64], events: &[bool]) -> Result<()> {
    if times.len() != events.len() {
        return Err(Error::Estimation(format!(
            "times and events differ in length: {} vs {}",
            times.len(),
            events.len()
        )));
    }
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Error::Estimation(format!("observed times must be positive and finite, got {t}")));
    }
    if !events.iter().any(|e| *e) {
        return Err(Error::Estimation("no events observed".into()));
    }
    Ok(())
}
