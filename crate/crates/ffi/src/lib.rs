//! C ABI for `frailhr`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_fit`
//! style functions and released with the matching `*_free`. Every fallible
//! function returns a [`FrailhrStatus`] and writes its result through an out
//! pointer; on failure the message is available from
//! [`frailhr_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use frailhr::data::Observation;
use frailhr::estimands::{landmark_contrast, log_survival_ratio, rmst, LandmarkKind, Source};
use frailhr::estimators::{cox_fit, CoxData, CoxFit, Covariates, NewtonOptions};
use frailhr::frailty::{self, Arm, MixtureArm, TwoArmTruth};
use frailhr::sim::{self, CensoringSpec, Coupling, Dataset, TrialConfig};
use frailhr::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrailhrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Unsupported = 4,
    Estimation = 5,
    BeyondSupport = 6,
    Panic = 99,
}

/// Treatment arm index: 0 = control, 1 = research.
pub type FrailhrArm = u8;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrailhrCoupling {
    Comonotone = 0,
    Independent = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrailhrCensoringKind {
    None = 0,
    Administrative = 1,
    Exponential = 2,
    Both = 3,
}

/// `admin_time` is read for `ADMINISTRATIVE` and `BOTH`, `rate` for `EXPONENTIAL` and `BOTH`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FrailhrCensoring {
    pub kind: FrailhrCensoringKind,
    pub admin_time: f64,
    pub rate: f64,
}

/// One simulated subject.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FrailhrRecord {
    pub id: u64,
    pub arm: FrailhrArm,
    pub stratum: usize,
    pub potential_time_0: f64,
    pub potential_time_1: f64,
    pub observed_time: f64,
    pub event: bool,
}

/// Treatment-arm coefficient and convergence data of a Cox fit.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FrailhrFitSummary {
    pub log_hr: f64,
    pub se: f64,
    pub iterations: usize,
    pub converged: bool,
    pub n_events: usize,
    pub loglik: f64,
}

/// Opaque two-arm mixture truth.
pub struct FrailhrTruth {
    inner: TwoArmTruth,
}

/// Opaque simulated dataset.
pub struct FrailhrDataset {
    inner: Dataset,
}

/// Opaque Cox fit.
pub struct FrailhrCoxFit {
    inner: CoxFit,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FrailhrStatus {
    match e {
        Error::Domain(_) => FrailhrStatus::Domain,
        Error::InvalidConfig(_) => FrailhrStatus::InvalidArgument,
        Error::Unsupported(_) => FrailhrStatus::Unsupported,
        Error::Estimation(_) => FrailhrStatus::Estimation,
        Error::BeyondSupport { .. } => FrailhrStatus::BeyondSupport,
    }
}

struct Failure(FrailhrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FrailhrStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FrailhrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FrailhrStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            FrailhrStatus::Panic
        }
    }
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn reference<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

fn arm(index: FrailhrArm) -> Result<Arm, Failure> {
    Arm::from_index(index)
        .ok_or_else(|| Failure(FrailhrStatus::InvalidArgument, format!("arm must be 0 or 1, got {index}")))
}

/// Message of the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn frailhr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn frailhr_status_string(status: FrailhrStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        FrailhrStatus::Ok => b"ok\0",
        FrailhrStatus::NullPointer => b"null pointer\0",
        FrailhrStatus::InvalidArgument => b"invalid argument\0",
        FrailhrStatus::Domain => b"domain error\0",
        FrailhrStatus::Unsupported => b"unsupported configuration\0",
        FrailhrStatus::Estimation => b"estimation error\0",
        FrailhrStatus::BeyondSupport => b"beyond estimated support\0",
        FrailhrStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Builds a two-arm truth from per-arm weight and rate arrays.
///
/// # Safety
/// Each array pointer must reference at least the given number of doubles.
/// `out` must be writable; on success it receives a handle to free with
/// [`frailhr_truth_free`].
#[no_mangle]
pub unsafe extern "C" fn frailhr_truth_new(
    control_weights: *const f64,
    control_rates: *const f64,
    control_components: usize,
    research_weights: *const f64,
    research_rates: *const f64,
    research_components: usize,
    out: *mut *mut FrailhrTruth,
) -> FrailhrStatus {
    guard(|| {
        let control = MixtureArm::new(
            slice(control_weights, control_components, "control_weights")?.to_vec(),
            slice(control_rates, control_components, "control_rates")?.to_vec(),
        )?;
        let research = MixtureArm::new(
            slice(research_weights, research_components, "research_weights")?.to_vec(),
            slice(research_rates, research_components, "research_rates")?.to_vec(),
        )?;
        let handle = Box::new(FrailhrTruth { inner: TwoArmTruth::new(control, research) });
        write(out, Box::into_raw(handle))
    })
}

/// The built-in two-stratum scenario.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_truth_two_stratum(out: *mut *mut FrailhrTruth) -> FrailhrStatus {
    guard(|| write(out, Box::into_raw(Box::new(FrailhrTruth { inner: TwoArmTruth::two_stratum() }))))
}

/// # Safety
/// `truth` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frailhr_truth_free(truth: *mut FrailhrTruth) {
    if !truth.is_null() {
        drop(Box::from_raw(truth));
    }
}

type ArmFn = fn(&MixtureArm, f64) -> frailhr::Result<f64>;

unsafe fn arm_quantity(
    truth: *const FrailhrTruth,
    which: FrailhrArm,
    t: f64,
    out: *mut f64,
    f: ArmFn,
) -> FrailhrStatus {
    guard(|| {
        let truth = reference(truth, "truth")?;
        let value = f(truth.inner.arm(arm(which)?), t)?;
        write(out, value)
    })
}

/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_marginal_survival(
    truth: *const FrailhrTruth,
    arm: FrailhrArm,
    t: f64,
    out: *mut f64,
) -> FrailhrStatus {
    arm_quantity(truth, arm, t, out, frailty::marginal_survival)
}

/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_marginal_hazard(
    truth: *const FrailhrTruth,
    arm: FrailhrArm,
    t: f64,
    out: *mut f64,
) -> FrailhrStatus {
    arm_quantity(truth, arm, t, out, frailty::marginal_hazard)
}

/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_marginal_density(
    truth: *const FrailhrTruth,
    arm: FrailhrArm,
    t: f64,
    out: *mut f64,
) -> FrailhrStatus {
    arm_quantity(truth, arm, t, out, frailty::marginal_density)
}

/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_cumulative_hazard(
    truth: *const FrailhrTruth,
    arm: FrailhrArm,
    t: f64,
    out: *mut f64,
) -> FrailhrStatus {
    arm_quantity(truth, arm, t, out, frailty::cumulative_hazard)
}

/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_hazard_ratio(truth: *const FrailhrTruth, t: f64, out: *mut f64) -> FrailhrStatus {
    guard(|| write(out, frailty::hazard_ratio(&reference(truth, "truth")?.inner, t)?))
}

/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_limit_hazard_ratio(truth: *const FrailhrTruth, out: *mut f64) -> FrailhrStatus {
    guard(|| write(out, frailty::limit_hazard_ratio(&reference(truth, "truth")?.inner)?))
}

/// Hazard ratio at each of `len` grid times, written to `out` (length `len`).
///
/// # Safety
/// `grid` and `out` must each reference `len` doubles; `truth` must be live.
#[no_mangle]
pub unsafe extern "C" fn frailhr_hazard_ratio_curve(
    truth: *const FrailhrTruth,
    grid: *const f64,
    len: usize,
    out: *mut f64,
) -> FrailhrStatus {
    guard(|| {
        let truth = reference(truth, "truth")?;
        let grid = slice(grid, len, "grid")?;
        let table = frailty::truth_curves(&truth.inner, grid)?;
        if out.is_null() {
            return Err(null("out"));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&table.hazard_ratio);
        Ok(())
    })
}

/// Restricted mean survival of one arm up to `horizon`.
///
/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_rmst(
    truth: *const FrailhrTruth,
    arm: FrailhrArm,
    horizon: f64,
    out: *mut f64,
) -> FrailhrStatus {
    guard(|| {
        let source = Source::Truth(reference(truth, "truth")?.inner.clone());
        write(out, rmst(&source, self::arm(arm)?, horizon)?.value)
    })
}

/// `S_research(t) - S_control(t)`.
///
/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_landmark_difference(
    truth: *const FrailhrTruth,
    t: f64,
    out: *mut f64,
) -> FrailhrStatus {
    guard(|| {
        let source = Source::Truth(reference(truth, "truth")?.inner.clone());
        write(out, landmark_contrast(&source, t, LandmarkKind::Difference)?.value)
    })
}

/// `log S_research(t) / log S_control(t)`.
///
/// # Safety
/// `truth` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_log_survival_ratio(
    truth: *const FrailhrTruth,
    t: f64,
    out: *mut f64,
) -> FrailhrStatus {
    guard(|| {
        let source = Source::Truth(reference(truth, "truth")?.inner.clone());
        write(out, log_survival_ratio(&source, t)?.value)
    })
}

fn censoring(c: &FrailhrCensoring) -> CensoringSpec {
    match c.kind {
        FrailhrCensoringKind::None => CensoringSpec::None,
        FrailhrCensoringKind::Administrative => CensoringSpec::Administrative { admin_time: c.admin_time },
        FrailhrCensoringKind::Exponential => CensoringSpec::Exponential { rate: c.rate },
        FrailhrCensoringKind::Both => CensoringSpec::Both { admin_time: c.admin_time, rate: c.rate },
    }
}

/// Simulates `n_per_arm` subjects per arm. Deterministic in `seed`.
///
/// # Safety
/// `truth` must be live, `censoring` NULL (no censoring) or valid, `out` writable.
/// Free the result with [`frailhr_dataset_free`].
#[no_mangle]
pub unsafe extern "C" fn frailhr_simulate(
    truth: *const FrailhrTruth,
    n_per_arm: usize,
    coupling: FrailhrCoupling,
    censoring: *const FrailhrCensoring,
    seed: u64,
    out: *mut *mut FrailhrDataset,
) -> FrailhrStatus {
    guard(|| {
        let truth = reference(truth, "truth")?;
        let config = TrialConfig {
            truth: truth.inner.clone(),
            n_per_arm,
            coupling: match coupling {
                FrailhrCoupling::Comonotone => Coupling::Comonotone,
                FrailhrCoupling::Independent => Coupling::Independent,
            },
            censoring: censoring.as_ref().map_or(CensoringSpec::None, self::censoring),
            seed,
        };
        let dataset = sim::simulate(&config)?;
        write(out, Box::into_raw(Box::new(FrailhrDataset { inner: dataset })))
    })
}

/// Number of records, or 0 for NULL.
///
/// # Safety
/// `dataset` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn frailhr_dataset_len(dataset: *const FrailhrDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.inner.records.len())
}

/// # Safety
/// `dataset` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_dataset_get(
    dataset: *const FrailhrDataset,
    index: usize,
    out: *mut FrailhrRecord,
) -> FrailhrStatus {
    guard(|| {
        let dataset = reference(dataset, "dataset")?;
        let r = dataset.inner.records.get(index).ok_or_else(|| {
            Failure(
                FrailhrStatus::InvalidArgument,
                format!("index {index} out of range for {} records", dataset.inner.records.len()),
            )
        })?;
        write(
            out,
            FrailhrRecord {
                id: r.id,
                arm: r.arm.index(),
                stratum: r.stratum,
                potential_time_0: r.potential_time_0,
                potential_time_1: r.potential_time_1,
                observed_time: r.observed_time,
                event: r.event,
            },
        )
    })
}

/// # Safety
/// `dataset` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frailhr_dataset_free(dataset: *mut FrailhrDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Cox fit on a simulated dataset, by arm alone or arm plus stratum indicators.
/// An unconverged fit is still returned with `FRAILHR_STATUS_OK`; check the summary.
///
/// # Safety
/// `dataset` must be live and `out` writable. Free with [`frailhr_cox_fit_free`].
#[no_mangle]
pub unsafe extern "C" fn frailhr_cox_fit(
    dataset: *const FrailhrDataset,
    adjust_for_stratum: bool,
    out: *mut *mut FrailhrCoxFit,
) -> FrailhrStatus {
    guard(|| {
        let dataset = reference(dataset, "dataset")?;
        let obs: Vec<Observation> = dataset.inner.observations();
        let covariates = if adjust_for_stratum { Covariates::ArmStratum } else { Covariates::Arm };
        let data = CoxData::from_observations(&obs, covariates)?;
        let fit = cox_fit(&data, &NewtonOptions::default())?;
        write(out, Box::into_raw(Box::new(FrailhrCoxFit { inner: fit })))
    })
}

/// # Safety
/// `fit` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frailhr_cox_fit_summary(fit: *const FrailhrCoxFit, out: *mut FrailhrFitSummary) -> FrailhrStatus {
    guard(|| {
        let fit = &reference(fit, "fit")?.inner;
        write(
            out,
            FrailhrFitSummary {
                log_hr: fit.arm().log_hr,
                se: fit.arm().se,
                iterations: fit.iterations,
                converged: fit.converged,
                n_events: fit.n_events,
                loglik: fit.loglik_at_max,
            },
        )
    })
}

/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frailhr_cox_fit_free(fit: *mut FrailhrCoxFit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}
