//! Table and report formats: dataset CSV, curve CSVs, fit/estimand JSON.
//!
//! Every float is written rounded to 9 significant digits and then in its
//! shortest round-trip form, so files are byte-stable across runs and
//! platforms. Line endings are always `\n`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimands::SensitivityRow;
use crate::estimators::{CoxFit, CoxTerm, PeriodFit, StepCurve};
use crate::data::Observation;
use crate::frailty::{Arm, CurveTable};
use crate::sim::IndividualRecord;

const Z_975: f64 = 1.959964;

pub const DATASET_HEADER: [&str; 4] = ["id", "arm", "observed_time", "event"];
pub const DATASET_HEADER_LATENT: [&str; 7] =
    ["id", "arm", "stratum", "potential_time_0", "potential_time_1", "observed_time", "event"];

/// Rounds to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// 9 significant digits, shortest representation; `nan`, `inf`, `-inf` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{}", round_sig(x))
}

/// One dataset row as stored on disk; latent fields are absent unless revealed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetRow {
    pub id: u64,
    pub arm: Arm,
    pub stratum: Option<usize>,
    pub potential_times: Option<(f64, f64)>,
    pub observed_time: f64,
    pub event: bool,
}

impl From<&IndividualRecord> for DatasetRow {
    fn from(r: &IndividualRecord) -> Self {
        Self {
            id: r.id,
            arm: r.arm,
            stratum: Some(r.stratum),
            potential_times: Some((r.potential_time_0, r.potential_time_1)),
            observed_time: r.observed_time,
            event: r.event,
        }
    }
}

impl DatasetRow {
    pub fn observation(&self) -> Observation {
        Observation { id: self.id, arm: self.arm, stratum: self.stratum, time: self.observed_time, event: self.event }
    }
}

pub fn dataset_csv(rows: &[DatasetRow], reveal_latent: bool) -> Result<String> {
    let mut out = String::new();
    let header: &[&str] = if reveal_latent { &DATASET_HEADER_LATENT } else { &DATASET_HEADER };
    out.push_str(&header.join(","));
    out.push('\n');
    for r in rows {
        let event = if r.event { "1" } else { "0" };
        if reveal_latent {
            let (Some(stratum), Some((t0, t1))) = (r.stratum, r.potential_times) else {
                return Err(Error::InvalidConfig(format!("row {} has no latent values to reveal", r.id)));
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.id,
                r.arm.index(),
                stratum,
                fmt_num(t0),
                fmt_num(t1),
                fmt_num(r.observed_time),
                event
            )
            .unwrap();
        } else {
            writeln!(out, "{},{},{},{}", r.id, r.arm.index(), fmt_num(r.observed_time), event).unwrap();
        }
    }
    Ok(out)
}

/// Error while reading a dataset CSV; `row` is the 1-based data row (header excluded).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("row {row}: {message}")]
pub struct CsvRowError {
    pub row: usize,
    pub message: String,
}

pub fn parse_dataset_csv(text: &str) -> std::result::Result<Vec<DatasetRow>, CsvRowError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header_err = |message: String| CsvRowError { row: 0, message };
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| header_err(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let latent = if header == DATASET_HEADER {
        false
    } else if header == DATASET_HEADER_LATENT {
        true
    } else {
        return Err(header_err(format!(
            "unexpected header {:?}; expected {:?} or {:?}",
            header.join(","),
            DATASET_HEADER.join(","),
            DATASET_HEADER_LATENT.join(",")
        )));
    };

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let err = |message: String| CsvRowError { row, message };
        let record = record.map_err(|e| err(e.to_string()))?;
        let field = |name: &str| -> std::result::Result<&str, CsvRowError> {
            let idx = header.iter().position(|h| h == name).expect("known column");
            record.get(idx).map(str::trim).ok_or_else(|| err(format!("missing column {name}")))
        };
        let float = |name: &str| -> std::result::Result<f64, CsvRowError> {
            let raw = field(name)?;
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
                _ => Err(err(format!("{name} must be a positive number, got {raw:?}"))),
            }
        };
        let id = field("id")?.parse::<u64>().map_err(|_| err("id must be a non-negative integer".into()))?;
        let arm = match field("arm")? {
            "0" => Arm::Control,
            "1" => Arm::Research,
            other => return Err(err(format!("arm must be 0 or 1, got {other:?}"))),
        };
        let event = match field("event")? {
            "0" => false,
            "1" => true,
            other => return Err(err(format!("event must be 0 or 1, got {other:?}"))),
        };
        let (stratum, potential_times) = if latent {
            let s = field("stratum")?
                .parse::<usize>()
                .map_err(|_| err("stratum must be a non-negative integer".into()))?;
            (Some(s), Some((float("potential_time_0")?, float("potential_time_1")?)))
        } else {
            (None, None)
        };
        rows.push(DatasetRow { id, arm, stratum, potential_times, observed_time: float("observed_time")?, event });
    }
    if rows.is_empty() {
        return Err(CsvRowError { row: 0, message: "dataset has no rows".into() });
    }
    Ok(rows)
}

/// Long format: every grid time for the control arm, then for the research arm.
pub fn curves_csv(table: &CurveTable) -> String {
    let mut out = String::from("t,arm,survival,hazard,cum_hazard\n");
    for arm in Arm::BOTH {
        let c = table.arm(arm);
        for i in 0..table.len() {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_num(table.grid[i]),
                arm.index(),
                fmt_num(c.survival[i]),
                fmt_num(c.hazard[i]),
                fmt_num(c.cum_hazard[i])
            )
            .unwrap();
        }
    }
    out
}

pub fn hr_csv(table: &CurveTable) -> String {
    let mut out = String::from("t,hazard_control,hazard_research,hazard_ratio\n");
    for i in 0..table.len() {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_num(table.grid[i]),
            fmt_num(table.control.hazard[i]),
            fmt_num(table.research.hazard[i]),
            fmt_num(table.hazard_ratio[i])
        )
        .unwrap();
    }
    out
}

/// What a [`StepCurve`]'s values estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Survival,
    CumulativeHazard,
}

/// One estimated curve destined for [`step_curves_csv`].
pub struct StepEntry<'a> {
    pub estimator: &'a str,
    pub arm: Arm,
    pub kind: StepKind,
    pub curve: &'a StepCurve,
}

/// Step curves in the curve-table layout plus an `estimator` column. The
/// `hazard` column holds the jump in cumulative hazard at each event time.
pub fn step_curves_csv(entries: &[StepEntry<'_>]) -> String {
    let mut out = String::from("t,arm,survival,hazard,cum_hazard,estimator\n");
    for e in entries {
        let mut prev = e.curve.initial;
        for (t, v) in e.curve.times.iter().zip(&e.curve.values) {
            let (surv, jump, cum) = match e.kind {
                StepKind::Survival => (*v, 1.0 - v / prev, -v.ln()),
                StepKind::CumulativeHazard => ((-v).exp(), v - prev, *v),
            };
            prev = *v;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_num(*t),
                e.arm.index(),
                fmt_num(surv),
                fmt_num(jump),
                fmt_num(cum),
                e.estimator
            )
            .unwrap();
        }
    }
    out
}

pub fn sensitivity_csv(rows: &[SensitivityRow]) -> String {
    let mut out = String::from("spec_label,mean_beta,mc_se,n_ok,n_failed\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.spec_label, fmt_num(r.mean_beta), fmt_num(r.mc_se), r.n_ok, r.n_failed)
            .unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermReport {
    pub name: String,
    pub beta: f64,
    pub se: f64,
    pub hr: f64,
    pub hr_ci_lower: f64,
    pub hr_ci_upper: f64,
}

impl From<&CoxTerm> for TermReport {
    fn from(t: &CoxTerm) -> Self {
        Self {
            name: t.name.clone(),
            beta: round_sig(t.log_hr),
            se: round_sig(t.se),
            hr: round_sig(t.log_hr.exp()),
            hr_ci_lower: round_sig((t.log_hr - Z_975 * t.se).exp()),
            hr_ci_upper: round_sig((t.log_hr + Z_975 * t.se).exp()),
        }
    }
}

/// Serialized Cox fit. The top-level coefficient fields describe the
/// treatment arm; `terms` lists every covariate including the arm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub beta: f64,
    pub se: f64,
    pub hr: f64,
    pub hr_ci_lower: f64,
    pub hr_ci_upper: f64,
    pub iterations: usize,
    pub converged: bool,
    pub n_events: usize,
    pub loglik: f64,
    pub terms: Vec<TermReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl From<&CoxFit> for FitReport {
    fn from(fit: &CoxFit) -> Self {
        let arm = TermReport::from(fit.arm());
        Self {
            beta: arm.beta,
            se: arm.se,
            hr: arm.hr,
            hr_ci_lower: arm.hr_ci_lower,
            hr_ci_upper: arm.hr_ci_upper,
            iterations: fit.iterations,
            converged: fit.converged,
            n_events: fit.n_events,
            loglik: round_sig(fit.loglik_at_max),
            terms: fit.terms.iter().map(TermReport::from).collect(),
            diagnostic: fit.diagnostic.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodReport {
    pub start: f64,
    pub end: f64,
    pub n_entering: usize,
    pub n_events: usize,
    pub empty: bool,
    pub fit: Option<FitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodFitReport {
    pub cutpoints: Vec<f64>,
    pub periods: Vec<PeriodReport>,
}

impl From<&PeriodFit> for PeriodFitReport {
    fn from(p: &PeriodFit) -> Self {
        Self {
            cutpoints: p.cutpoints.iter().copied().map(round_sig).collect(),
            periods: p
                .periods
                .iter()
                .map(|q| PeriodReport {
                    start: round_sig(q.start),
                    end: round_sig(q.end),
                    n_entering: q.n_entering,
                    n_events: q.n_events,
                    empty: q.is_empty(),
                    fit: q.fit.as_ref().map(FitReport::from),
                    note: q.note.clone(),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Writes via a temporary file in the same directory, then renames over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    use std::io::Write;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
