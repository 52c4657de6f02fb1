//! Command-line driver for histogram-valued regression.
//!
//! Exit codes: 0 on success, 2 for input errors, 3 for numerical failures.

pub mod dataset;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use histreg::simgen::{run_experiment, ExperimentConfig};
use histreg::{fit, Quantile, Table};

use dataset::{quantile_of, DatasetFile, HistogramRecord};
use report::{
    format_sig12, to_json, CoefficientsRecord, FitReport, PredictionReport, RmseRecord,
    SimulationReport, UnitPrediction,
};

/// Version of the dataset and report documents.
pub const SCHEMA: u32 = 1;

/// Environment variable capping the number of simulation threads.
pub const THREADS_ENV: &str = "HISTREG_THREADS";

/// A command failure together with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    pub fn code(&self) -> i32 {
        self.code
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<histreg::Error> for Failure {
    fn from(e: histreg::Error) -> Self {
        use histreg::Error::*;
        match e {
            MaxIterationsExceeded { .. } | NotPsd | NonFinite | DegenerateResponse => {
                Failure::numerical(e.to_string())
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "histreg",
    version,
    about = "Regression between histogram-valued variables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Mallows (L2 Wasserstein) distance.
    Mallows,
    /// Squared Mallows distance.
    MallowsSq,
    /// L1 Wasserstein distance.
    Wasserstein,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the model and write a report.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        response: String,
        #[arg(long, value_delimiter = ',', required = true)]
        predictors: Vec<String>,
        /// Requantize every value to K equal-weight bins first.
        #[arg(long, value_name = "K")]
        equiprobable: Option<usize>,
        /// Leave these units out of the fit.
        #[arg(long, value_delimiter = ',')]
        exclude_units: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a fitted model to a dataset.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Only these units.
        #[arg(long, value_delimiter = ',')]
        units: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance between two units' values of one variable.
    Distance {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        var: String,
        #[arg(long)]
        unit_a: String,
        #[arg(long)]
        unit_b: String,
        #[arg(long, value_enum, default_value = "mallows")]
        metric: Metric,
    },
    /// Run a simulation experiment described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every invariant violation in a dataset.
    Validate {
        #[arg(long)]
        data: PathBuf,
    },
    /// Convert a CSV of equiprobable quantile knots into a dataset.
    ImportCsv {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Fit {
            data,
            response,
            predictors,
            equiprobable,
            exclude_units,
            out,
        } => {
            let report = cmd_fit(&data, &response, &predictors, equiprobable, &exclude_units)?;
            match out {
                Some(path) => {
                    write_file(&path, &to_json(&report))?;
                    emit(stdout, &fit_summary(&report))
                }
                None => emit(stdout, &to_json(&report)),
            }
        }
        Command::Predict {
            model,
            data,
            units,
            out,
        } => {
            let report = cmd_predict(&model, &data, units.as_deref())?;
            deliver(stdout, out.as_deref(), &to_json(&report))
        }
        Command::Distance {
            data,
            var,
            unit_a,
            unit_b,
            metric,
        } => {
            let d = cmd_distance(&data, &var, &unit_a, &unit_b, metric)?;
            emit(stdout, &format!("{}\n", format_sig12(d)))
        }
        Command::Simulate { config, out } => {
            let report = cmd_simulate(&config)?;
            deliver(stdout, out.as_deref(), &to_json(&report))
        }
        Command::Validate { data } => {
            let issues = cmd_validate(&data)?;
            let mut text = String::new();
            for i in &issues {
                text.push_str(&format!("{i}\n"));
            }
            text.push_str(&format!("{} issues\n", issues.len()));
            emit(stdout, &text)?;
            if issues.is_empty() {
                Ok(())
            } else {
                Err(Failure::input(format!(
                    "{} issues in {}",
                    issues.len(),
                    data.display()
                )))
            }
        }
        Command::ImportCsv { csv, out } => {
            let text = std::fs::read_to_string(&csv)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", csv.display())))?;
            let ds = dataset::import_csv(&text)?;
            deliver(stdout, out.as_deref(), &ds.to_json())
        }
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Failure::input(format!("cannot write output: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn deliver(stdout: &mut dyn Write, out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, text),
        None => emit(stdout, text),
    }
}

fn fit_summary(r: &FitReport) -> String {
    let mut s = String::new();
    for (k, name) in r.predictors.iter().enumerate() {
        s.push_str(&format!(
            "{name}: alpha {:.4}  beta {:.4}\n",
            r.coefficients.alphas[k], r.coefficients.betas[k]
        ));
    }
    s.push_str(&format!("gamma {:.4}\n", r.coefficients.gamma));
    s.push_str(&format!("omega {:.4}  se {:.4}\n", r.omega, r.se));
    s.push_str(&format!(
        "rmse_l {:.4}  rmse_u {:.4}  rmse_m {:.4}\n",
        r.rmse.l, r.rmse.u, r.rmse.m
    ));
    s
}

pub fn cmd_fit(
    data: &Path,
    response: &str,
    predictors: &[String],
    equiprobable: Option<usize>,
    exclude_units: &[String],
) -> Result<FitReport, Failure> {
    if equiprobable == Some(0) {
        return Err(Failure::input("--equiprobable needs K >= 1"));
    }
    let ds = DatasetFile::load(data)?;
    ds.require_variable(response)?;
    for p in predictors {
        ds.require_variable(p)?;
    }
    for l in exclude_units {
        ds.unit(l)?;
    }
    let units: Vec<_> = ds
        .units
        .iter()
        .filter(|u| !exclude_units.contains(&u.label))
        .collect();
    if units.is_empty() {
        return Err(Failure::input("every unit is excluded"));
    }
    let labels: Vec<String> = units.iter().map(|u| u.label.clone()).collect();
    let y = units
        .iter()
        .map(|u| quantile_of(u, response, equiprobable))
        .collect::<Result<Vec<_>, _>>()?;
    let xs = predictors
        .iter()
        .map(|p| {
            units
                .iter()
                .map(|u| quantile_of(u, p, equiprobable))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let table = Table::new(labels, y, xs)?;
    let model = fit(&table)?;
    let predicted = model.predict_table(&table)?;
    let unit_reports: Vec<UnitPrediction> = table
        .labels()
        .iter()
        .zip(table.response().units())
        .zip(predicted.units())
        .map(|((label, obs), pred)| UnitPrediction {
            label: label.clone(),
            predicted: HistogramRecord::from_histogram(&pred.to_histogram()),
            rmse: Some(RmseRecord::of_unit(obs, pred)),
        })
        .collect();
    let m = histreg::rmse_m(table.response(), &predicted)?;
    let (l, u) = histreg::rmse_bounds(table.response(), &predicted)?;
    Ok(FitReport {
        schema: SCHEMA,
        version: histreg::VERSION.to_owned(),
        response: response.to_owned(),
        predictors: predictors.to_vec(),
        equiprobable,
        excluded_units: exclude_units.to_vec(),
        partition: model.partition.clone(),
        coefficients: CoefficientsRecord::from_coefficients(&model.coefficients),
        omega: model.omega,
        se: model.se,
        kkt_residual: model.kkt_residual,
        iterations: model.iterations,
        regularized: model.regularized,
        rmse: RmseRecord { m, l, u },
        units: unit_reports,
    })
}

pub fn read_fit_report(path: &Path) -> Result<FitReport, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let report: FitReport = serde_json::from_str(&text).map_err(|e| {
        Failure::input(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    if report.schema != SCHEMA {
        return Err(Failure::input(format!(
            "{}: unsupported schema {}",
            path.display(),
            report.schema
        )));
    }
    Ok(report)
}

pub fn cmd_predict(
    model: &Path,
    data: &Path,
    units: Option<&[String]>,
) -> Result<PredictionReport, Failure> {
    let fitted = read_fit_report(model)?;
    let coefficients = fitted.coefficients.to_coefficients()?;
    if coefficients.p() != fitted.predictors.len() {
        return Err(Failure::input(format!(
            "{}: {} predictors but {} coefficient pairs",
            model.display(),
            fitted.predictors.len(),
            coefficients.p()
        )));
    }
    let ds = DatasetFile::load(data)?;
    for p in &fitted.predictors {
        ds.require_variable(p)?;
    }
    let has_response = ds.has_variable(&fitted.response);
    let mut out = Vec::new();
    for u in ds.select(units)? {
        let xs: Vec<Quantile> = fitted
            .predictors
            .iter()
            .map(|p| quantile_of(u, p, fitted.equiprobable))
            .collect::<Result<_, _>>()?;
        let pred = coefficients.predict_on(&fitted.partition, &xs)?;
        let rmse = if has_response {
            let obs = quantile_of(u, &fitted.response, fitted.equiprobable)?;
            Some(RmseRecord::of_unit(&obs, &pred))
        } else {
            None
        };
        out.push(UnitPrediction {
            label: u.label.clone(),
            predicted: HistogramRecord::from_histogram(&pred.to_histogram()),
            rmse,
        });
    }
    let rmse = if has_response {
        RmseRecord::aggregate(&out.iter().filter_map(|u| u.rmse).collect::<Vec<_>>())
    } else {
        None
    };
    Ok(PredictionReport {
        schema: SCHEMA,
        version: histreg::VERSION.to_owned(),
        response: fitted.response,
        predictors: fitted.predictors,
        units: out,
        rmse,
    })
}

pub fn cmd_distance(
    data: &Path,
    var: &str,
    unit_a: &str,
    unit_b: &str,
    metric: Metric,
) -> Result<f64, Failure> {
    let ds = DatasetFile::load(data)?;
    ds.require_variable(var)?;
    let a = quantile_of(ds.unit(unit_a)?, var, None)?;
    let b = quantile_of(ds.unit(unit_b)?, var, None)?;
    Ok(match metric {
        Metric::Mallows => histreg::mallows_sq(&a, &b).max(0.0).sqrt(),
        Metric::MallowsSq => histreg::mallows_sq(&a, &b),
        Metric::Wasserstein => histreg::wasserstein(&a, &b),
    })
}

/// Thread count requested through [`THREADS_ENV`], if any.
pub fn requested_threads() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::input(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

pub fn cmd_simulate(config: &Path) -> Result<SimulationReport, Failure> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", config.display())))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
        Failure::input(format!(
            "{}:{}:{}: {e}",
            config.display(),
            e.line(),
            e.column()
        ))
    })?;
    cfg.validate().map_err(|e| Failure::input(e.to_string()))?;
    let summary = match requested_threads()? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::numerical(format!("cannot start thread pool: {e}")))?;
            pool.install(|| run_experiment(&cfg))?
        }
        None => run_experiment(&cfg)?,
    };
    Ok(SimulationReport {
        schema: SCHEMA,
        version: histreg::VERSION.to_owned(),
        config: cfg,
        summary,
    })
}

pub fn cmd_validate(data: &Path) -> Result<Vec<dataset::Issue>, Failure> {
    Ok(DatasetFile::read(data)?.issues())
}
