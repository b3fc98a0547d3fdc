//! Command-line front end.
//!
//! Exit codes: 0 success (including unconverged fits), 1 input error, 2 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::data::{arm_sample, Observation};
use crate::error::Error;
use crate::estimands::{
    censoring_sensitivity, landmark_contrast, log_survival_ratio, rmst, rmst_difference, LandmarkKind, Source,
};
use crate::estimators::{
    breslow_baseline, cox_fit, kaplan_meier, nelson_aalen, period_specific_cox, CoxData, Covariates, NewtonOptions,
};
use crate::frailty::{truth_curves, Arm};
use crate::io::{
    curves_csv, dataset_csv, hr_csv, parse_dataset_csv, sensitivity_csv, step_curves_csv, to_json, write_atomic,
    DatasetRow, FitReport, PeriodFitReport, StepEntry, StepKind,
};
use crate::sim::{simulate, CensoringSpec};

#[derive(Debug, Parser)]
#[command(name = "frailhr", version, about = "Frailty-mixture hazard ratios: truth curves, trial simulation, estimation")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Run configuration (TOML). Defaults to the built-in two-stratum scenario.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Simulation seed; overrides `trial.seed` in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write closed-form curves (curves.csv) and hazard ratios (hr.csv) on the configured grid.
    Truth,
    /// Simulate a trial and write dataset.csv.
    Simulate {
        /// Include stratum and both potential event times.
        #[arg(long)]
        reveal_latent: bool,
    },
    /// Fit Cox models to a dataset CSV; writes fit.json, curves_estimated.csv and more.
    Fit {
        /// Dataset CSV with at least `id,arm,observed_time,event`.
        dataset: PathBuf,
        /// `arm` or `arm,stratum`.
        #[arg(long)]
        covariates: Option<String>,
        /// Period end points, e.g. `1,4,30`; adds periods.json.
        #[arg(long, value_delimiter = ',')]
        cutpoints: Option<Vec<f64>>,
    },
    /// Landmark, RMST and log-survival-ratio estimands, plus the censoring-sensitivity table.
    Estimands {
        /// `truth` or a dataset CSV path.
        #[arg(long, default_value = "truth")]
        source: String,
        /// Landmark time (default: grid midpoint for truth, median observed time for data).
        #[arg(long)]
        landmark: Option<f64>,
        /// RMST horizon (default: grid max for truth, last common event time for data).
        #[arg(long)]
        rmst: Option<f64>,
        /// Comma-separated censoring specs, e.g. `admin:2,admin:30,exp:0.1`.
        #[arg(long)]
        sensitivity: Option<String>,
        /// Monte Carlo replicates per censoring spec (default from config, 200).
        #[arg(long)]
        replicates: Option<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(1),
            CliError::Io(_) => ExitCode::from(2),
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs, and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Runs one command and returns the files it wrote.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let mut config = load_config(cli.global.config.as_deref())?;
    if let Some(seed) = cli.global.seed {
        config.trial.seed = seed;
    }
    let out_dir = cli
        .global
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));

    let outputs = match &cli.command {
        Command::Truth => cmd_truth(&config)?,
        Command::Simulate { reveal_latent } => cmd_simulate(&config, *reveal_latent)?,
        Command::Fit { dataset, covariates, cutpoints } => {
            let covariates = match covariates {
                Some(c) => c.parse()?,
                None => config.covariates,
            };
            let cutpoints = cutpoints.clone().or_else(|| config.cutpoints.clone());
            cmd_fit(dataset, covariates, cutpoints.as_deref())?
        }
        Command::Estimands { source, landmark, rmst, sensitivity, replicates } => {
            let specs = match sensitivity {
                Some(list) => list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<CensoringSpec>, Error>>()?,
                None => config.estimands.sensitivity.clone(),
            };
            let opts = EstimandOptions {
                landmark: landmark.or(config.estimands.landmark),
                rmst: rmst.or(config.estimands.rmst),
                sensitivity: specs,
                replicates: replicates.unwrap_or(config.estimands.replicates),
            };
            cmd_estimands(&config, source, &opts)?
        }
    };
    write_outputs(&out_dir, outputs)
}

fn load_config(path: Option<&Path>) -> CliResult<RunConfig> {
    match path {
        None => Ok(RunConfig::two_stratum()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", p.display())))?;
            RunConfig::from_toml(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
    }
}

/// File name and contents.
pub type Output = (&'static str, String);

fn write_outputs(dir: &Path, outputs: Vec<Output>) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create output directory {}: {e}", dir.display())))?;
    outputs
        .into_iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            write_atomic(&path, &contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}

pub fn cmd_truth(config: &RunConfig) -> CliResult<Vec<Output>> {
    let table = truth_curves(config.truth(), &config.grid.times()?)?;
    Ok(vec![("curves.csv", curves_csv(&table)), ("hr.csv", hr_csv(&table))])
}

pub fn cmd_simulate(config: &RunConfig, reveal_latent: bool) -> CliResult<Vec<Output>> {
    let dataset = simulate(&config.trial)?;
    let rows: Vec<DatasetRow> = dataset.records.iter().map(DatasetRow::from).collect();
    Ok(vec![("dataset.csv", dataset_csv(&rows, reveal_latent)?)])
}

fn read_dataset(path: &Path) -> CliResult<Vec<DatasetRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read dataset {}: {e}", path.display())))?;
    parse_dataset_csv(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn cmd_fit(dataset: &Path, covariates: Covariates, cutpoints: Option<&[f64]>) -> CliResult<Vec<Output>> {
    let rows = read_dataset(dataset)?;
    let obs: Vec<Observation> = rows.iter().map(DatasetRow::observation).collect();
    let opts = NewtonOptions::default();

    let data = CoxData::from_observations(&obs, covariates)?;
    let fit = cox_fit(&data, &opts)?;
    let mut outputs = vec![("fit.json", to_json(&FitReport::from(&fit)))];

    let mut curves = Vec::new();
    for arm in Arm::BOTH {
        let (t, e) = arm_sample(&obs, arm);
        if e.iter().any(|x| *x) {
            curves.push((arm, kaplan_meier(&t, &e)?, nelson_aalen(&t, &e)?));
        }
    }
    let mut entries = Vec::new();
    for (arm, km, na) in &curves {
        entries.push(StepEntry { estimator: "kaplan_meier", arm: *arm, kind: StepKind::Survival, curve: km });
        entries.push(StepEntry { estimator: "nelson_aalen", arm: *arm, kind: StepKind::CumulativeHazard, curve: na });
    }
    outputs.push(("curves_estimated.csv", step_curves_csv(&entries)));

    if fit.converged {
        let baseline = breslow_baseline(&fit, &data)?;
        let entry = StepEntry { estimator: "breslow", arm: Arm::Control, kind: StepKind::CumulativeHazard, curve: &baseline };
        outputs.push(("baseline.csv", step_curves_csv(&[entry])));
    }

    if let Some(cuts) = cutpoints {
        let periods = period_specific_cox(&obs, covariates, cuts, &opts)?;
        outputs.push(("periods.json", to_json(&PeriodFitReport::from(&periods))));
    }
    Ok(outputs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimandOptions {
    pub landmark: Option<f64>,
    pub rmst: Option<f64>,
    pub sensitivity: Vec<CensoringSpec>,
    pub replicates: usize,
}

pub fn cmd_estimands(config: &RunConfig, source: &str, opts: &EstimandOptions) -> CliResult<Vec<Output>> {
    let (src, default_landmark, default_horizon) = if source == "truth" {
        let max = config.grid.max;
        (Source::Truth(config.truth().clone()), max / 2.0, max)
    } else {
        let rows = read_dataset(Path::new(source))?;
        let obs: Vec<Observation> = rows.iter().map(DatasetRow::observation).collect();
        let src = Source::from_observations(&obs)?;
        let mut times: Vec<f64> = obs.iter().map(|o| o.time).collect();
        times.sort_by(f64::total_cmp);
        let median = times[(times.len() - 1) / 2];
        let last_event = match &src {
            Source::Estimated { control, research } => {
                control.times.last().copied().unwrap_or(0.0).min(research.times.last().copied().unwrap_or(0.0))
            }
            Source::Truth(_) => unreachable!(),
        };
        (src, median, last_event)
    };
    let landmark = opts.landmark.unwrap_or(default_landmark);
    let horizon = opts.rmst.unwrap_or(default_horizon);

    let mut reports = Vec::new();
    for kind in LandmarkKind::ALL {
        reports.push(landmark_contrast(&src, landmark, kind)?);
    }
    reports.push(rmst(&src, Arm::Control, horizon)?);
    reports.push(rmst(&src, Arm::Research, horizon)?);
    reports.push(rmst_difference(&src, horizon)?);
    reports.push(log_survival_ratio(&src, landmark)?);
    let reports: Vec<_> = reports.into_iter().map(rounded).collect();

    let mut outputs = vec![("estimands.json", to_json(&reports))];
    if !opts.sensitivity.is_empty() {
        let rows = censoring_sensitivity(&config.trial, &opts.sensitivity, opts.replicates, Covariates::Arm)?;
        outputs.push(("sensitivity.csv", sensitivity_csv(&rows)));
    }
    Ok(outputs)
}

fn rounded(mut r: crate::estimands::EstimandReport) -> crate::estimands::EstimandReport {
    use crate::io::round_sig;
    r.horizon = round_sig(r.horizon);
    r.value = round_sig(r.value);
    r.per_arm.control = round_sig(r.per_arm.control);
    r.per_arm.research = round_sig(r.per_arm.research);
    r
}
