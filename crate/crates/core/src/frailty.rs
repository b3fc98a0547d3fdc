//! Closed-form survival quantities for finite mixtures of exponentials.
//!
//! Each arm of the trial is a population made of `K` latent strata. Within
//! stratum `k` event times are exponential with rate `rates[k]`, and the
//! stratum has prior probability `weights[k]`. Everything in this module is
//! computed in the log domain so that very late times (where every
//! `exp(-rate * t)` underflows) still give a well-defined survivor mix.

use serde::Serialize;

use crate::error::{Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// One arm's true event-time law: a K-point exponential mixture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureArm {
    weights: Vec<f64>,
    rates: Vec<f64>,
}

impl MixtureArm {
    pub fn new(weights: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidConfig("a mixture needs at least one component".into()));
        }
        if weights.len() != rates.len() {
            return Err(Error::InvalidConfig(format!(
                "weights and rates differ in length: {} vs {}",
                weights.len(),
                rates.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidConfig(format!("weights must be positive, got {w}")));
        }
        if let Some(r) = rates.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidConfig(format!("rates must be positive, got {r}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidConfig(format!("weights must sum to 1, got {total}")));
        }
        Ok(Self { weights, rates })
    }

    /// Single exponential component.
    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![rate])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn components(&self) -> usize {
        self.weights.len()
    }

    /// Same weights, every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.weights.clone(), self.rates.iter().map(|r| r * factor).collect())
    }

    /// `log(p_k) - rate_k * t` for every component, plus the log-sum-exp of them.
    fn log_terms(&self, t: f64) -> Result<(Vec<f64>, f64)> {
        check_time(t)?;
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.rates)
            .map(|(p, rate)| p.ln() - rate * t)
            .collect();
        let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = max + terms.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
        Ok((terms, log_sum))
    }

    pub fn log_survival(&self, t: f64) -> Result<f64> {
        self.log_terms(t).map(|(_, log_s)| log_s)
    }

    pub fn restricted_mean(&self, horizon: f64) -> Result<f64> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        Ok(self
            .weights
            .iter()
            .zip(&self.rates)
            .map(|(p, rate)| p * (-(-rate * horizon).exp_m1()) / rate)
            .sum())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    Ok(())
}

/// Paired control (`Z = 0`) and research (`Z = 1`) arms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoArmTruth {
    pub control: MixtureArm,
    pub research: MixtureArm,
}

impl TwoArmTruth {
    pub fn new(control: MixtureArm, research: MixtureArm) -> Self {
        Self { control, research }
    }

    /// Two equal-sized strata; control rates 0.1 and 0.5, research rates 0.05 and 0.25.
    pub fn two_stratum() -> Self {
        Self {
            control: MixtureArm::new(vec![0.5, 0.5], vec![0.1, 0.5]).expect("valid arm"),
            research: MixtureArm::new(vec![0.5, 0.5], vec![0.05, 0.25]).expect("valid arm"),
        }
    }

    pub fn arm(&self, arm: Arm) -> &MixtureArm {
        match arm {
            Arm::Control => &self.control,
            Arm::Research => &self.research,
        }
    }
}

/// Treatment assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Control,
    Research,
}

impl Arm {
    pub const BOTH: [Arm; 2] = [Arm::Control, Arm::Research];

    pub fn index(self) -> u8 {
        match self {
            Arm::Control => 0,
            Arm::Research => 1,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(Arm::Control),
            1 => Some(Arm::Research),
            _ => None,
        }
    }
}

/// `S(t) = sum_k p_k exp(-rate_k t)`.
pub fn marginal_survival(arm: &MixtureArm, t: f64) -> Result<f64> {
    arm.log_survival(t).map(f64::exp)
}

/// `h(t) = sum_k rate_k p_k exp(-rate_k t) / S(t)`, evaluated as the
/// survivor-composition average of the component rates.
pub fn marginal_hazard(arm: &MixtureArm, t: f64) -> Result<f64> {
    let composition = survivor_composition(arm, t)?;
    Ok(composition.iter().zip(arm.rates()).map(|(w, r)| w * r).sum())
}

pub fn marginal_density(arm: &MixtureArm, t: f64) -> Result<f64> {
    Ok(marginal_hazard(arm, t)? * marginal_survival(arm, t)?)
}

/// `H(t) = -log S(t)`.
pub fn cumulative_hazard(arm: &MixtureArm, t: f64) -> Result<f64> {
    // -0.0 at t = 0 would print as "-0"
    arm.log_survival(t).map(|log_s| 0.0 - log_s)
}

/// Research-over-control ratio of marginal hazards at `t`.
pub fn hazard_ratio(truth: &TwoArmTruth, t: f64) -> Result<f64> {
    Ok(marginal_hazard(&truth.research, t)? / marginal_hazard(&truth.control, t)?)
}

/// The `t -> infinity` limit of [`hazard_ratio`]: ratio of the smallest rates.
///
/// Requires a unique smallest rate in each arm.
pub fn limit_hazard_ratio(truth: &TwoArmTruth) -> Result<f64> {
    let control = unique_min_rate(&truth.control, "control")?;
    let research = unique_min_rate(&truth.research, "research")?;
    Ok(research / control)
}

fn unique_min_rate(arm: &MixtureArm, label: &str) -> Result<f64> {
    let min = arm.rates().iter().copied().fold(f64::INFINITY, f64::min);
    let ties = arm.rates().iter().filter(|r| **r == min).count();
    if ties > 1 {
        return Err(Error::Unsupported(format!(
            "{label} arm has {ties} components tied at the minimum rate {min}; \
             the limiting hazard ratio needs a unique dominant stratum"
        )));
    }
    Ok(min)
}

/// Posterior stratum probabilities among survivors at `t`:
/// `p_k exp(-rate_k t) / S(t)`.
pub fn survivor_composition(arm: &MixtureArm, t: f64) -> Result<Vec<f64>> {
    let (terms, log_s) = arm.log_terms(t)?;
    Ok(terms.iter().map(|x| (x - log_s).exp()).collect())
}

/// Per-arm columns of a [`CurveTable`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmCurves {
    pub survival: Vec<f64>,
    pub hazard: Vec<f64>,
    pub cum_hazard: Vec<f64>,
}

/// Gridded truth for both arms and their hazard ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveTable {
    pub grid: Vec<f64>,
    pub control: ArmCurves,
    pub research: ArmCurves,
    pub hazard_ratio: Vec<f64>,
}

impl CurveTable {
    pub fn arm(&self, arm: Arm) -> &ArmCurves {
        match arm {
            Arm::Control => &self.control,
            Arm::Research => &self.research,
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

pub fn truth_curves(truth: &TwoArmTruth, grid: &[f64]) -> Result<CurveTable> {
    validate_grid(grid)?;
    let arm_curves = |arm: &MixtureArm| -> Result<ArmCurves> {
        let mut out = ArmCurves {
            survival: Vec::with_capacity(grid.len()),
            hazard: Vec::with_capacity(grid.len()),
            cum_hazard: Vec::with_capacity(grid.len()),
        };
        for &t in grid {
            out.survival.push(marginal_survival(arm, t)?);
            out.hazard.push(marginal_hazard(arm, t)?);
            out.cum_hazard.push(cumulative_hazard(arm, t)?);
        }
        Ok(out)
    };
    let control = arm_curves(&truth.control)?;
    let research = arm_curves(&truth.research)?;
    let hazard_ratio = research
        .hazard
        .iter()
        .zip(&control.hazard)
        .map(|(r, c)| r / c)
        .collect();
    Ok(CurveTable { grid: grid.to_vec(), control, research, hazard_ratio })
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("grid is empty".into()));
    }
    if let Some(t) = grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::Domain(format!("grid times must be finite and non-negative, got {t}")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `points` equally spaced times on `[min, max]`, endpoints included.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::Domain("grid needs at least one point".into()));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    if max.is_nan() || min.is_nan() || max <= min {
        return Err(Error::Domain(format!("grid max {max} must exceed min {min}")));
    }
    let step = (max - min) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| min + step * i as f64).collect();
    grid[points - 1] = max;
    Ok(grid)
}

/// 601 points on `[0, 30]`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(0.0, 30.0, 601).expect("valid default grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    // 40-digit mpmath evaluations of the closed forms.
    const S0_AT_1: f64 = 0.755_684_038_874_296_5;
    const S1_AT_1: f64 = 0.865_015_103_786_059_4;
    const H0_AT_1: f64 = 0.260_524_935_955_019_2;
    const F0_AT_1: f64 = 0.196_874_535_829_956_33;
    const CUMH0_AT_1: f64 = 0.280_131_928_159_992_7;
    const HR_AT_1: f64 = 0.537_504_020_581_284_3;

    fn control() -> MixtureArm {
        TwoArmTruth::two_stratum().control
    }

    #[test]
    fn rejects_bad_arms() {
        assert!(MixtureArm::new(vec![], vec![]).is_err());
        assert!(MixtureArm::new(vec![0.5, 0.5], vec![0.1]).is_err());
        assert!(MixtureArm::new(vec![0.5, 0.6], vec![0.1, 0.2]).is_err());
        assert!(MixtureArm::new(vec![1.0, 0.0], vec![0.1, 0.2]).is_err());
        assert!(MixtureArm::new(vec![1.0], vec![0.0]).is_err());
        assert!(MixtureArm::new(vec![1.0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn survival_examples() {
        let single = MixtureArm::exponential(0.1).unwrap();
        assert_abs_diff_eq!(marginal_survival(&single, 10.0).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(marginal_survival(&control(), 1.0).unwrap(), S0_AT_1, epsilon = 1e-14);
        assert_abs_diff_eq!(
            marginal_survival(&TwoArmTruth::two_stratum().research, 1.0).unwrap(),
            S1_AT_1,
            epsilon = 1e-14
        );
        assert_eq!(marginal_survival(&control(), 0.0).unwrap(), 1.0);
        assert!(matches!(marginal_survival(&control(), -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn hazard_examples() {
        assert_abs_diff_eq!(marginal_hazard(&control(), 0.0).unwrap(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(marginal_hazard(&control(), 1.0).unwrap(), H0_AT_1, epsilon = 1e-14);
        let single = MixtureArm::exponential(0.25).unwrap();
        for t in [0.0, 1.0, 1e3, 1e6] {
            assert_abs_diff_eq!(marginal_hazard(&single, t).unwrap(), 0.25, epsilon = 1e-15);
        }
        assert!(marginal_hazard(&control(), -0.1).is_err());
    }

    #[test]
    fn density_and_cumulative_examples() {
        let single = MixtureArm::exponential(0.5).unwrap();
        assert_abs_diff_eq!(marginal_density(&single, 0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(marginal_density(&control(), 1.0).unwrap(), F0_AT_1, epsilon = 1e-14);
        assert!(marginal_density(&control(), 500.0).unwrap() < 1e-20);
        assert_eq!(cumulative_hazard(&control(), 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            cumulative_hazard(&MixtureArm::exponential(0.1).unwrap(), 10.0).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(cumulative_hazard(&control(), 1.0).unwrap(), CUMH0_AT_1, epsilon = 1e-14);
        assert!(cumulative_hazard(&control(), -2.0).is_err());
        assert!(marginal_density(&control(), -2.0).is_err());
    }

    #[test]
    fn hazard_ratio_examples() {
        let truth = TwoArmTruth::two_stratum();
        assert_abs_diff_eq!(hazard_ratio(&truth, 0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(hazard_ratio(&truth, 1.0).unwrap(), HR_AT_1, epsilon = 1e-14);
        let same = TwoArmTruth::new(control(), control());
        for t in [0.0, 0.3, 7.0, 90.0] {
            assert_eq!(hazard_ratio(&same, t).unwrap(), 1.0);
        }
        assert!(hazard_ratio(&truth, -1.0).is_err());
    }

    #[test]
    fn limit_hazard_ratio_examples() {
        assert_abs_diff_eq!(limit_hazard_ratio(&TwoArmTruth::two_stratum()).unwrap(), 0.5, epsilon = 1e-15);
        let same = TwoArmTruth::new(control(), control());
        assert_eq!(limit_hazard_ratio(&same).unwrap(), 1.0);

        let alt = TwoArmTruth::new(
            MixtureArm::new(vec![0.5, 0.5], vec![0.2, 0.6]).unwrap(),
            MixtureArm::new(vec![0.5, 0.5], vec![0.3, 0.9]).unwrap(),
        );
        let limit = limit_hazard_ratio(&alt).unwrap();
        assert_abs_diff_eq!(limit, 1.5, epsilon = 1e-15);
        assert!((hazard_ratio(&alt, 200.0).unwrap() - limit).abs() < 1e-6);

        let tied = TwoArmTruth::new(
            MixtureArm::new(vec![0.3, 0.3, 0.4], vec![0.1, 0.1, 0.5]).unwrap(),
            control(),
        );
        assert!(matches!(limit_hazard_ratio(&tied), Err(Error::Unsupported(_))));
    }

    #[test]
    fn composition_examples() {
        let arm = MixtureArm::new(vec![0.2, 0.3, 0.5], vec![0.4, 0.1, 1.0]).unwrap();
        let at0 = survivor_composition(&arm, 0.0).unwrap();
        for (a, b) in at0.iter().zip(arm.weights()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let late = survivor_composition(&control(), 100.0).unwrap();
        assert!(late[0] > 1.0 - 1e-9);
        let single = MixtureArm::exponential(3.0).unwrap();
        assert_eq!(survivor_composition(&single, 1e4).unwrap(), vec![1.0]);
        // far beyond exp underflow the mix is still well defined
        let very_late = survivor_composition(&control(), 1e5).unwrap();
        assert_eq!(very_late, vec![1.0, 0.0]);
        assert_abs_diff_eq!(marginal_hazard(&control(), 1e5).unwrap(), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn curves_examples() {
        let truth = TwoArmTruth::two_stratum();
        let table = truth_curves(&truth, &[0.0]).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.control.survival[0], 1.0);
        assert_eq!(table.research.survival[0], 1.0);
        assert_abs_diff_eq!(table.control.hazard[0], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(table.research.hazard[0], 0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(table.hazard_ratio[0], 0.5, epsilon = 1e-15);

        let same = TwoArmTruth::new(control(), control());
        let table = truth_curves(&same, &default_grid()).unwrap();
        assert!(table.hazard_ratio.iter().all(|hr| *hr == 1.0));

        assert!(truth_curves(&truth, &[]).is_err());
        assert!(truth_curves(&truth, &[0.0, 2.0, 1.0]).is_err());
        assert!(truth_curves(&truth, &[0.0, 0.0]).is_err());
        assert!(truth_curves(&truth, &[-1.0, 0.0]).is_err());
    }

    #[test]
    fn hazard_ratio_hump_shape() {
        let truth = TwoArmTruth::two_stratum();
        let table = truth_curves(&truth, &default_grid()).unwrap();
        let hr = &table.hazard_ratio;
        let (imax, max) = hr
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        // mpmath dense-grid oracle: max 0.728577411105506 at t = 6.95 (grid index 139)
        assert_eq!(imax, 139);
        assert_abs_diff_eq!(max, 0.728_577_411_105_505_6, epsilon = 1e-12);
        assert_abs_diff_eq!(hr[0], 0.5, epsilon = 1e-15);
        assert!(hr[hr.len() - 1] < max);
        assert!(hr.iter().all(|v| *v >= 0.5 - 1e-12));
    }

    #[test]
    fn curve_table_invariants() {
        let table = truth_curves(&TwoArmTruth::two_stratum(), &default_grid()).unwrap();
        for arm in Arm::BOTH {
            let c = table.arm(arm);
            assert_eq!(c.survival[0], 1.0);
            assert!(c.survival.windows(2).all(|w| w[1] <= w[0]));
            assert!(c.survival.iter().all(|s| *s > 0.0 && *s <= 1.0));
            assert!(c.hazard.iter().all(|h| *h > 0.0));
            for (s, h) in c.survival.iter().zip(&c.cum_hazard) {
                assert!((h + s.ln()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn density_integrates_to_distribution_function() {
        let arm = control();
        let upper = 40.0;
        let panels = 400_000;
        let step = upper / panels as f64;
        let mut area = 0.0;
        for i in 0..panels {
            let a = marginal_density(&arm, i as f64 * step).unwrap();
            let b = marginal_density(&arm, (i + 1) as f64 * step).unwrap();
            area += 0.5 * step * (a + b);
        }
        let target = 1.0 - marginal_survival(&arm, upper).unwrap();
        assert!((area - target).abs() < 1e-8, "{area} vs {target}");
    }

    #[test]
    fn uniform_grid_endpoints() {
        let g = default_grid();
        assert_eq!(g.len(), 601);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[600], 30.0);
        assert_abs_diff_eq!(g[1], 0.05, epsilon = 1e-15);
        assert!(uniform_grid(1.0, 1.0, 3).is_err());
        assert!(uniform_grid(0.0, 1.0, 0).is_err());
    }

    fn arb_arm() -> impl Strategy<Value = MixtureArm> {
        prop::collection::vec((0.05f64..1.0, 0.01f64..3.0), 1..5).prop_map(|parts| {
            let total: f64 = parts.iter().map(|p| p.0).sum();
            let mut weights: Vec<f64> = parts.iter().map(|p| p.0 / total).collect();
            let head: f64 = weights[1..].iter().sum();
            weights[0] = 1.0 - head;
            MixtureArm::new(weights, parts.iter().map(|p| p.1).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn hazard_matches_finite_difference(arm in arb_arm(), t in 0.0f64..40.0) {
            let eps = 1e-6 * t.max(1.0);
            let t = t.max(eps);
            let lo = arm.log_survival(t - eps).unwrap();
            let hi = arm.log_survival(t + eps).unwrap();
            let fd = -(hi - lo) / (2.0 * eps);
            prop_assert!((marginal_hazard(&arm, t).unwrap() - fd).abs() < 1e-5);
        }

        #[test]
        fn hazard_bounded_and_non_increasing(arm in arb_arm(), t in 1e-3f64..50.0, dt in 1e-3f64..5.0) {
            let h = marginal_hazard(&arm, t).unwrap();
            let later = marginal_hazard(&arm, t + dt).unwrap();
            prop_assert!(later <= h * (1.0 + 1e-12));
            let mean: f64 = arm.weights().iter().zip(arm.rates()).map(|(p, r)| p * r).sum();
            let min = arm.rates().iter().copied().fold(f64::INFINITY, f64::min);
            prop_assert!(h <= mean * (1.0 + 1e-12));
            prop_assert!(h >= min * (1.0 - 1e-12));
            let distinct = arm.rates().iter().any(|r| (r - min).abs() > 1e-3);
            if distinct && t < 5.0 {
                prop_assert!(h > min && h < mean);
            }
        }

        #[test]
        fn closed_form_identities(arm in arb_arm(), t in 0.0f64..60.0) {
            let s = marginal_survival(&arm, t).unwrap();
            let h = marginal_hazard(&arm, t).unwrap();
            let f = marginal_density(&arm, t).unwrap();
            let cum = cumulative_hazard(&arm, t).unwrap();
            prop_assert!(s > 0.0 && s <= 1.0);
            prop_assert!(((-cum).exp() - s).abs() < 1e-12);
            prop_assert!((f - h * s).abs() < 1e-12);
            let comp = survivor_composition(&arm, t).unwrap();
            prop_assert!((comp.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn dominant_component_share_grows(arm in arb_arm(), t in 0.0f64..40.0, dt in 0.0f64..10.0) {
            let k = arm.rates().iter().enumerate()
                .fold(0, |best, (i, r)| if *r < arm.rates()[best] { i } else { best });
            let a = survivor_composition(&arm, t).unwrap()[k];
            let b = survivor_composition(&arm, t + dt).unwrap()[k];
            prop_assert!(b >= a - 1e-12);
        }

        #[test]
        fn time_rate_scaling(arm in arb_arm(), other in arb_arm(), t in 0.0f64..20.0, c in 0.1f64..10.0) {
            let scaled = arm.scaled(c).unwrap();
            let lhs = marginal_hazard(&scaled, t).unwrap();
            let rhs = c * marginal_hazard(&arm, c * t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));

            let truth = TwoArmTruth::new(arm.clone(), other.clone());
            let truth_scaled = TwoArmTruth::new(scaled, other.scaled(c).unwrap());
            let a = hazard_ratio(&truth_scaled, t).unwrap();
            let b = hazard_ratio(&truth, c * t).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * b.max(1.0));
        }
    }
}
