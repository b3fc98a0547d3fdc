use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::nonparametric::{empty_curve, risk_table, StepCurve};
use super::validate_sample;
use crate::data::Observation;
use crate::error::{Error, Result};

/// Which covariates enter the linear predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Covariates {
    /// Treatment arm only.
    Arm,
    /// Arm plus indicators for each non-reference latent stratum.
    ArmStratum,
}

impl std::str::FromStr for Covariates {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts: Vec<&str> = s.split(',').map(str::trim).collect();
        parts.sort_unstable();
        match parts.as_slice() {
            ["arm"] => Ok(Covariates::Arm),
            ["arm", "stratum"] => Ok(Covariates::ArmStratum),
            _ => Err(Error::InvalidConfig(format!("covariates must be `arm` or `arm,stratum`, got {s:?}"))),
        }
    }
}

/// Design for a Cox fit: right-censored times plus a row-major covariate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CoxData {
    times: Vec<f64>,
    events: Vec<bool>,
    rows: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl CoxData {
    pub fn new(times: Vec<f64>, events: Vec<bool>, rows: Vec<Vec<f64>>, names: Vec<String>) -> Result<Self> {
        validate_sample(&times, &events)?;
        if rows.len() != times.len() {
            return Err(Error::Estimation(format!(
                "{} covariate rows for {} subjects",
                rows.len(),
                times.len()
            )));
        }
        let p = names.len();
        if p == 0 {
            return Err(Error::Estimation("at least one covariate is required".into()));
        }
        if rows.iter().any(|r| r.len() != p || r.iter().any(|x| !x.is_finite())) {
            return Err(Error::Estimation(format!("every covariate row must hold {p} finite values")));
        }
        for (j, name) in names.iter().enumerate() {
            if rows.iter().all(|r| r[j] == rows[0][j]) {
                return Err(Error::Estimation(format!("covariate `{name}` is constant")));
            }
        }
        Ok(Self { times, events, rows, names })
    }

    pub fn from_observations(obs: &[Observation], covariates: Covariates) -> Result<Self> {
        let mut names = vec!["arm".to_string()];
        let mut levels: Vec<usize> = Vec::new();
        if covariates == Covariates::ArmStratum {
            for o in obs {
                let s = o.stratum.ok_or_else(|| {
                    Error::Estimation(format!("subject {} has no stratum; stratum adjustment needs latent columns", o.id))
                })?;
                levels.push(s);
            }
            levels.sort_unstable();
            levels.dedup();
            if levels.len() < 2 {
                return Err(Error::Estimation("stratum adjustment needs at least two observed strata".into()));
            }
            names.extend(levels[1..].iter().map(|k| format!("stratum_{k}")));
        }
        let rows = obs
            .iter()
            .map(|o| {
                let mut row = vec![f64::from(o.arm.index())];
                if let Some(s) = o.stratum.filter(|_| covariates == Covariates::ArmStratum) {
                    row.extend(levels[1..].iter().map(|k| if *k == s { 1.0 } else { 0.0 }));
                }
                row
            })
            .collect();
        Self::new(
            obs.iter().map(|o| o.time).collect(),
            obs.iter().map(|o| o.event).collect(),
            rows,
            names,
        )
    }

    pub fn n_obs(&self) -> usize {
        self.times.len()
    }

    pub fn n_events(&self) -> usize {
        self.events.iter().filter(|e| **e).count()
    }

    pub fn n_covariates(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn events(&self) -> &[bool] {
        &self.events
    }

    fn linear_predictor(&self, beta: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().zip(beta).map(|(x, b)| x * b).sum()).collect()
    }

    /// Subject indices in descending time order.
    fn descending(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.times.len()).collect();
        order.sort_by(|a, b| self.times[*b].total_cmp(&self.times[*a]));
        order
    }
}

/// Log partial likelihood with its gradient and negative Hessian.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialLikelihood {
    pub loglik: f64,
    pub score: Vec<f64>,
    pub information: Vec<Vec<f64>>,
}

/// Breslow-tied log partial likelihood at `beta`.
pub fn log_partial_likelihood(data: &CoxData, beta: &[f64]) -> Result<PartialLikelihood> {
    let p = data.n_covariates();
    if beta.len() != p {
        return Err(Error::Estimation(format!("expected {p} coefficients, got {}", beta.len())));
    }
    let eta = data.linear_predictor(beta);
    let shift = eta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let order = data.descending();

    let mut s0 = 0.0;
    let mut s1 = vec![0.0; p];
    let mut s2 = vec![vec![0.0; p]; p];
    let mut loglik = 0.0;
    let mut score = vec![0.0; p];
    let mut info = vec![vec![0.0; p]; p];

    let mut i = 0;
    while i < order.len() {
        let t = data.times[order[i]];
        let mut d = 0usize;
        let mut event_x = vec![0.0; p];
        let mut event_eta = 0.0;
        while i < order.len() && data.times[order[i]] == t {
            let k = order[i];
            let x = &data.rows[k];
            let w = (eta[k] - shift).exp();
            s0 += w;
            for a in 0..p {
                s1[a] += w * x[a];
                for b in 0..p {
                    s2[a][b] += w * x[a] * x[b];
                }
            }
            if data.events[k] {
                d += 1;
                event_eta += eta[k];
                for a in 0..p {
                    event_x[a] += x[a];
                }
            }
            i += 1;
        }
        if d == 0 {
            continue;
        }
        let d = d as f64;
        loglik += event_eta - d * (shift + s0.ln());
        for a in 0..p {
            let mean_a = s1[a] / s0;
            score[a] += event_x[a] - d * mean_a;
            for b in 0..p {
                info[a][b] += d * (s2[a][b] / s0 - mean_a * s1[b] / s0);
            }
        }
    }
    Ok(PartialLikelihood { loglik, score, information: info })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub score_tol: f64,
    pub max_iter: usize,
    /// Any `|beta_j|` above this is treated as a diverging (monotone) likelihood.
    pub divergence_bound: f64,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { score_tol: 1e-8, max_iter: 50, divergence_bound: 15.0, max_halvings: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoxTerm {
    pub name: String,
    pub log_hr: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoxFit {
    pub terms: Vec<CoxTerm>,
    pub iterations: usize,
    pub converged: bool,
    pub loglik_at_max: f64,
    /// Largest absolute score component at the returned coefficients.
    pub score_at_max: f64,
    pub n_obs: usize,
    pub n_events: usize,
    pub diagnostic: Option<String>,
}

impl CoxFit {
    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.log_hr).collect()
    }

    pub fn term(&self, name: &str) -> Option<&CoxTerm> {
        self.terms.iter().find(|t| t.name == name)
    }

    /// The treatment-arm term, always first.
    pub fn arm(&self) -> &CoxTerm {
        &self.terms[0]
    }
}

fn to_matrix(m: &[Vec<f64>]) -> DMatrix<f64> {
    let p = m.len();
    DMatrix::from_fn(p, p, |i, j| m[i][j])
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Newton–Raphson maximisation of the partial likelihood from `beta = 0`
/// with step halving. Divergence or exhausting the iteration budget gives
/// `converged = false` plus a diagnostic rather than an error.
pub fn cox_fit(data: &CoxData, opts: &NewtonOptions) -> Result<CoxFit> {
    let p = data.n_covariates();
    let mut beta = vec![0.0; p];
    let mut current = log_partial_likelihood(data, &beta)?;
    let mut iterations = 0;
    let mut diagnostic = None;
    let mut converged = false;

    loop {
        if max_abs(&current.score) < opts.score_tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            diagnostic = Some(format!("no convergence after {} iterations", opts.max_iter));
            break;
        }
        iterations += 1;
        let info = to_matrix(&current.information);
        let score = DVector::from_column_slice(&current.score);
        let step = info
            .clone()
            .cholesky()
            .map(|c| c.solve(&score))
            .or_else(|| info.lu().solve(&score))
            .ok_or_else(|| Error::Estimation("information matrix is singular".into()))?;

        // changes below this are rounding noise in a sum over many risk sets
        let slack = 1e-12 * current.loglik.abs().max(1.0);
        let mut scale = 1.0;
        let mut halvings = 0;
        let (next_beta, next) = loop {
            let trial: Vec<f64> = beta.iter().zip(step.iter()).map(|(b, s)| b + scale * s).collect();
            let eval = log_partial_likelihood(data, &trial)?;
            if eval.loglik >= current.loglik - slack || halvings >= opts.max_halvings {
                break (trial, eval);
            }
            scale *= 0.5;
            halvings += 1;
        };
        beta = next_beta;
        current = next;
        if beta.iter().any(|b| b.abs() > opts.divergence_bound) {
            diagnostic = Some(format!(
                "|beta| exceeded {} (monotone likelihood: event order separates the covariate)",
                opts.divergence_bound
            ));
            break;
        }
    }

    let covariance = to_matrix(&current.information).try_inverse();
    let terms = data
        .names
        .iter()
        .enumerate()
        .map(|(j, name)| CoxTerm {
            name: name.clone(),
            log_hr: beta[j],
            se: covariance.as_ref().map_or(f64::INFINITY, |c| c[(j, j)].max(0.0).sqrt()),
        })
        .collect();
    Ok(CoxFit {
        terms,
        iterations,
        converged,
        loglik_at_max: current.loglik,
        score_at_max: max_abs(&current.score),
        n_obs: data.n_obs(),
        n_events: data.n_events(),
        diagnostic,
    })
}

/// Breslow cumulative baseline hazard at arbitrary coefficients:
/// increments `d_j / sum_{risk set} exp(beta . x)`.
pub fn breslow_cumulative_hazard(data: &CoxData, beta: &[f64]) -> Result<StepCurve> {
    if beta.len() != data.n_covariates() {
        return Err(Error::Estimation(format!(
            "expected {} coefficients, got {}",
            data.n_covariates(),
            beta.len()
        )));
    }
    let risk = data.linear_predictor(beta).into_iter().map(f64::exp).collect::<Vec<_>>();
    let table = risk_table(&data.times, &data.events);
    let mut curve = empty_curve(&data.times, &table, 0.0);

    // risk-set sums at each event time, swept from the latest time down
    let order = data.descending();
    let mut sums = vec![0.0; table.len()];
    let mut cursor = 0;
    let mut s0 = 0.0;
    for j in (0..table.len()).rev() {
        while cursor < order.len() && data.times[order[cursor]] >= table[j].0 {
            s0 += risk[order[cursor]];
            cursor += 1;
        }
        sums[j] = s0;
    }
    let (mut cum, mut var) = (0.0, 0.0);
    for (j, &(_, _, d)) in table.iter().enumerate() {
        cum += d as f64 / sums[j];
        var += d as f64 / (sums[j] * sums[j]);
        curve.values.push(cum);
        curve.variance.push(var);
    }
    Ok(curve)
}

/// Breslow baseline at a fitted model's coefficients. The fit must have converged.
pub fn breslow_baseline(fit: &CoxFit, data: &CoxData) -> Result<StepCurve> {
    if !fit.converged {
        return Err(Error::Estimation("Breslow baseline requires a converged Cox fit".into()));
    }
    breslow_cumulative_hazard(data, &fit.coefficients())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::nelson_aalen;
    use crate::frailty::Arm;
    use approx::assert_abs_diff_eq;

    /// (time, event, arm)
    const FIXTURE: [(f64, bool, f64); 6] = [
        (1.0, true, 0.0),
        (2.0, true, 1.0),
        (3.0, false, 0.0),
        (4.0, true, 0.0),
        (5.0, true, 1.0),
        (6.0, false, 1.0),
    ];

    fn fixture() -> CoxData {
        CoxData::new(
            FIXTURE.iter().map(|r| r.0).collect(),
            FIXTURE.iter().map(|r| r.1).collect(),
            FIXTURE.iter().map(|r| vec![r.2]).collect(),
            vec!["arm".into()],
        )
        .unwrap()
    }

    /// Direct double loop over subjects, no sorting or running sums.
    fn brute_loglik(beta: f64) -> f64 {
        FIXTURE
            .iter()
            .filter(|r| r.1)
            .map(|r| {
                let denom: f64 = FIXTURE.iter().filter(|s| s.0 >= r.0).map(|s| (beta * s.2).exp()).sum();
                beta * r.2 - denom.ln()
            })
            .sum()
    }

    #[test]
    fn newton_matches_grid_search() {
        let fit = cox_fit(&fixture(), &NewtonOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.score_at_max < 1e-8);
        let best = (0..=60_000)
            .map(|i| -3.0 + i as f64 * 1e-4)
            .map(|b| (b, brute_loglik(b)))
            .fold((0.0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert!((fit.arm().log_hr - best.0).abs() < 1e-3, "{} vs {}", fit.arm().log_hr, best.0);
        assert_abs_diff_eq!(fit.loglik_at_max, brute_loglik(fit.arm().log_hr), epsilon = 1e-12);
    }

    #[test]
    fn breslow_hand_fixture() {
        let data = fixture();
        let fit = cox_fit(&data, &NewtonOptions::default()).unwrap();
        let r = fit.arm().log_hr.exp();
        let base = breslow_baseline(&fit, &data).unwrap();
        assert_eq!(base.times, vec![1.0, 2.0, 4.0, 5.0]);
        let inc = [1.0 / (3.0 + 3.0 * r), 1.0 / (2.0 + 3.0 * r), 1.0 / (1.0 + 2.0 * r), 1.0 / (2.0 * r)];
        let mut cum = 0.0;
        for (v, i) in base.values.iter().zip(inc) {
            cum += i;
            assert!((v - cum).abs() < 1e-10);
        }
    }

    #[test]
    fn breslow_at_zero_is_nelson_aalen() {
        let data = fixture();
        let base = breslow_cumulative_hazard(&data, &[0.0]).unwrap();
        let na = nelson_aalen(data.times(), data.events()).unwrap();
        assert_eq!(base.times, na.times);
        for (a, b) in base.values.iter().zip(&na.values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn unconverged_fit_rejected_by_breslow() {
        // every event in arm 1 before any arm 0 subject fails: separation
        let data = CoxData::new(
            vec![1.0, 2.0, 3.0, 4.0],
            vec![true, true, false, false],
            vec![vec![1.0], vec![1.0], vec![0.0], vec![0.0]],
            vec!["arm".into()],
        )
        .unwrap();
        let fit = cox_fit(&data, &NewtonOptions::default()).unwrap();
        assert!(!fit.converged);
        assert!(fit.arm().log_hr > 15.0);
        assert!(fit.diagnostic.as_deref().unwrap().contains("monotone"));
        assert!(breslow_baseline(&fit, &data).is_err());
    }

    #[test]
    fn iteration_budget_is_reported() {
        let opts = NewtonOptions { max_iter: 1, ..Default::default() };
        let fit = cox_fit(&fixture(), &opts).unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.iterations, 1);
        assert!(fit.diagnostic.is_some());
    }

    #[test]
    fn ties_use_breslow_denominator() {
        let data = CoxData::new(
            vec![1.0, 1.0, 2.0, 3.0],
            vec![true, true, true, false],
            vec![vec![0.0], vec![1.0], vec![1.0], vec![0.0]],
            vec!["arm".into()],
        )
        .unwrap();
        let beta = 0.3f64;
        let r = beta.exp();
        let expected = (beta - (2.0 + 2.0 * r).ln()) * 1.0 + (0.0 - (2.0 + 2.0 * r).ln()) + (beta - (1.0 + r).ln());
        let pl = log_partial_likelihood(&data, &[beta]).unwrap();
        assert_abs_diff_eq!(pl.loglik, expected, epsilon = 1e-12);
    }

    #[test]
    fn score_and_information_match_finite_differences() {
        let data = fixture();
        let h = 1e-5;
        for beta in [-1.0, 0.0, 0.7] {
            let pl = log_partial_likelihood(&data, &[beta]).unwrap();
            let up = log_partial_likelihood(&data, &[beta + h]).unwrap();
            let down = log_partial_likelihood(&data, &[beta - h]).unwrap();
            assert!((pl.score[0] - (up.loglik - down.loglik) / (2.0 * h)).abs() < 1e-7);
            assert!((pl.information[0][0] + (up.score[0] - down.score[0]) / (2.0 * h)).abs() < 1e-7);
        }
    }

    #[test]
    fn scaling_times_leaves_beta_unchanged() {
        let data = fixture();
        let scaled = CoxData::new(
            data.times().iter().map(|t| t * 37.5).collect(),
            data.events().to_vec(),
            FIXTURE.iter().map(|r| vec![r.2]).collect(),
            vec!["arm".into()],
        )
        .unwrap();
        let a = cox_fit(&data, &NewtonOptions::default()).unwrap();
        let b = cox_fit(&scaled, &NewtonOptions::default()).unwrap();
        assert_eq!(a.arm().log_hr, b.arm().log_hr);
    }

    #[test]
    fn data_validation() {
        let constant = CoxData::new(vec![1.0, 2.0], vec![true, true], vec![vec![1.0], vec![1.0]], vec!["arm".into()]);
        assert!(constant.is_err());
        let no_events = CoxData::new(vec![1.0, 2.0], vec![false, false], vec![vec![0.0], vec![1.0]], vec!["arm".into()]);
        assert!(no_events.is_err());
        assert_eq!("arm".parse::<Covariates>().unwrap(), Covariates::Arm);
        assert_eq!("stratum,arm".parse::<Covariates>().unwrap(), Covariates::ArmStratum);
        assert!("age".parse::<Covariates>().is_err());
    }

    #[test]
    fn stratum_needs_latent_column() {
        let obs = vec![
            Observation { id: 1, arm: Arm::Control, stratum: None, time: 1.0, event: true },
            Observation { id: 2, arm: Arm::Research, stratum: None, time: 2.0, event: true },
        ];
        assert!(CoxData::from_observations(&obs, Covariates::ArmStratum).is_err());
        assert!(CoxData::from_observations(&obs, Covariates::Arm).is_ok());
    }
}
