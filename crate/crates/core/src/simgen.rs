//! Monte-Carlo study of the estimator: equiprobable histograms built from
//! simulated microdata, an exact linear response, a continuous piecewise
//! linear disturbance, and replicated fits.

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, LogNormal, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsd::{fit, DsdCoefficients, DsdModel, SymbolicTable};
use crate::error::{Error, Result};
use crate::histcore::{PiecewiseLinear, QuantileFunction};
use crate::metrics::{rmse_bounds, rmse_m, VariableColumn};

/// Closed interval a hyperparameter is drawn from; equal ends fix it.
pub type Range = [f64; 2];

/// How the microdata of one unit are generated. Every unit first draws its
/// own parameters from the given ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    /// `U(δ1, δ2)` with `δ1 ~ U(lower)`, `δ2 ~ U(upper)`.
    Uniform {
        #[serde(default = "uniform_lower")]
        lower: Range,
        #[serde(default = "uniform_upper")]
        upper: Range,
    },
    /// `N(μ, σ²)` with `μ ~ U(mean)`, `σ² ~ U(variance)`.
    Normal {
        #[serde(default = "normal_mean")]
        mean: Range,
        #[serde(default = "normal_variance")]
        variance: Range,
    },
    /// `exp(N(μ, σ²))`.
    Lognormal {
        #[serde(default = "lognormal_mu")]
        mu: Range,
        #[serde(default = "lognormal_variance")]
        variance: Range,
    },
    /// `-exp(N(μ, σ²))`.
    NegLognormal {
        #[serde(default = "fixed_zero")]
        mu: Range,
        #[serde(default = "fixed_half")]
        variance: Range,
    },
    Chisq {
        #[serde(default = "one")]
        dof: f64,
    },
    /// Each unit picks one of `U(1,3)`, `N(1,1)`, `χ²(1)`, `lnN(0,0.5)`,
    /// `-lnN(0,0.5)` uniformly at random.
    Mixture,
}

fn uniform_lower() -> Range {
    [-2.0, 0.0]
}
fn uniform_upper() -> Range {
    [0.0, 2.0]
}
fn normal_mean() -> Range {
    [0.0, 1.0]
}
fn normal_variance() -> Range {
    [0.0, 2.0]
}
fn lognormal_mu() -> Range {
    [-0.5, 0.5]
}
fn lognormal_variance() -> Range {
    [0.5, 1.0]
}
fn fixed_zero() -> Range {
    [0.0, 0.0]
}
fn fixed_half() -> Range {
    [0.5, 0.5]
}
fn one() -> f64 {
    1.0
}

impl DistributionSpec {
    pub fn uniform() -> Self {
        Self::Uniform {
            lower: uniform_lower(),
            upper: uniform_upper(),
        }
    }

    pub fn normal() -> Self {
        Self::Normal {
            mean: normal_mean(),
            variance: normal_variance(),
        }
    }

    pub fn lognormal() -> Self {
        Self::Lognormal {
            mu: lognormal_mu(),
            variance: lognormal_variance(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let range = |name: &str, r: &Range, min: f64| {
            if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
                return Err(Error::InvalidConfig(format!("{name}: bad range {r:?}")));
            }
            if r[0] < min {
                return Err(Error::InvalidConfig(format!("{name}: must be >= {min}")));
            }
            Ok(())
        };
        match self {
            Self::Uniform { lower, upper } => {
                range("lower", lower, f64::NEG_INFINITY)?;
                range("upper", upper, f64::NEG_INFINITY)?;
                if lower[1] > upper[0] {
                    return Err(Error::InvalidConfig(
                        "uniform lower endpoint range overlaps the upper one".into(),
                    ));
                }
            }
            Self::Normal { mean, variance } => {
                range("mean", mean, f64::NEG_INFINITY)?;
                range("variance", variance, 0.0)?;
            }
            Self::Lognormal { mu, variance } | Self::NegLognormal { mu, variance } => {
                range("mu", mu, f64::NEG_INFINITY)?;
                range("variance", variance, 0.0)?;
            }
            Self::Chisq { dof } => {
                if !(*dof > 0.0 && dof.is_finite()) {
                    return Err(Error::InvalidConfig("chisq: dof must be positive".into()));
                }
            }
            Self::Mixture => {}
        }
        Ok(())
    }

    /// Draws the unit-level parameters and then `n` values.
    pub fn sample_unit<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match self {
            Self::Uniform { lower, upper } => {
                let a = draw(lower, rng);
                let b = draw(upper, rng);
                if a == b {
                    return vec![a; n];
                }
                let d = Uniform::new_inclusive(a, b).expect("ordered endpoints");
                d.sample_iter(rng).take(n).collect()
            }
            Self::Normal { mean, variance } => {
                let mu = draw(mean, rng);
                let sd = draw(variance, rng).sqrt();
                let d = Normal::new(mu, sd).expect("finite parameters");
                d.sample_iter(rng).take(n).collect()
            }
            Self::Lognormal { mu, variance } => {
                let mu = draw(mu, rng);
                let sd = draw(variance, rng).sqrt();
                let d = LogNormal::new(mu, sd).expect("finite parameters");
                d.sample_iter(rng).take(n).collect()
            }
            Self::NegLognormal { mu, variance } => {
                let mu = draw(mu, rng);
                let sd = draw(variance, rng).sqrt();
                let d = LogNormal::new(mu, sd).expect("finite parameters");
                d.sample_iter(rng).take(n).map(|v: f64| -v).collect()
            }
            Self::Chisq { dof } => {
                let d = ChiSquared::new(*dof).expect("positive dof");
                d.sample_iter(rng).take(n).collect()
            }
            Self::Mixture => {
                let pick = rng.random_range(0..5);
                let spec = match pick {
                    0 => Self::Uniform {
                        lower: [1.0, 1.0],
                        upper: [3.0, 3.0],
                    },
                    1 => Self::Normal {
                        mean: [1.0, 1.0],
                        variance: [1.0, 1.0],
                    },
                    2 => Self::Chisq { dof: 1.0 },
                    3 => Self::Lognormal {
                        mu: fixed_zero(),
                        variance: fixed_half(),
                    },
                    _ => Self::NegLognormal {
                        mu: fixed_zero(),
                        variance: fixed_half(),
                    },
                };
                spec.sample_unit(n, rng)
            }
        }
    }
}

fn draw<R: Rng + ?Sized>(r: &Range, rng: &mut R) -> f64 {
    if r[0] == r[1] {
        r[0]
    } else {
        rng.random_range(r[0]..=r[1])
    }
}

/// Strength of the disturbance added to the exact linear response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearityLevel {
    High,
    Moderate,
    Low,
}

impl LinearityLevel {
    /// Half-width of the first center shift, as a multiple of the mean
    /// absolute center of the response column.
    pub fn center_factor(self) -> f64 {
        match self {
            Self::High => 3.0 / 8.0,
            Self::Moderate => 1.5,
            Self::Low => 3.0,
        }
    }

    /// Half-width of the half-range shifts, as a multiple of the smallest
    /// half-range in the response column.
    pub fn range_factor(self) -> f64 {
        match self {
            Self::High => 1.0 / 8.0,
            Self::Moderate => 0.5,
            Self::Low => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrueParams {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub gamma: f64,
}

impl TrueParams {
    pub fn coefficients(&self) -> Result<DsdCoefficients<f64>> {
        DsdCoefficients::new(self.alphas.clone(), self.betas.clone(), self.gamma)
    }

    /// `[α_1, β_1, ..., γ]`.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::new();
        for (a, b) in self.alphas.iter().zip(&self.betas) {
            v.push(*a);
            v.push(*b);
        }
        v.push(self.gamma);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub true_params: TrueParams,
    /// One per predictor.
    pub distributions: Vec<DistributionSpec>,
    pub linearity: LinearityLevel,
    pub m: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_microdata")]
    pub microdata_n: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub base_seed: u64,
}

fn default_bins() -> usize {
    10
}
fn default_microdata() -> usize {
    5000
}
fn default_replications() -> usize {
    200
}

impl ExperimentConfig {
    pub fn new(
        true_params: TrueParams,
        distributions: Vec<DistributionSpec>,
        linearity: LinearityLevel,
        m: usize,
    ) -> Self {
        Self {
            true_params,
            distributions,
            linearity,
            m,
            bins: default_bins(),
            microdata_n: default_microdata(),
            replications: default_replications(),
            base_seed: 0,
        }
    }

    pub fn p(&self) -> usize {
        self.true_params.alphas.len()
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if p == 0 {
            return Err(Error::InvalidConfig(
                "at least one predictor is required".into(),
            ));
        }
        if self.true_params.betas.len() != p || self.distributions.len() != p {
            return Err(Error::InvalidConfig(format!(
                "{p} alphas need as many betas and distributions"
            )));
        }
        self.true_params
            .coefficients()
            .map_err(|_| Error::InvalidConfig("true alphas and betas must be >= 0".into()))?;
        if !self.true_params.gamma.is_finite() {
            return Err(Error::InvalidConfig("gamma must be finite".into()));
        }
        if self.replications < 1 {
            return Err(Error::InvalidConfig("replications must be >= 1".into()));
        }
        if self.m < 2 {
            return Err(Error::InvalidConfig("m must be >= 2".into()));
        }
        if self.bins < 2 {
            return Err(Error::InvalidConfig("bins must be >= 2".into()));
        }
        if self.microdata_n < 2 {
            return Err(Error::InvalidConfig("microdata_n must be >= 2".into()));
        }
        for d in &self.distributions {
            d.validate()?;
        }
        Ok(())
    }
}

/// Linear-interpolation sample quantile of sorted data.
fn sample_quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Equal-weight quantile function whose knots are the sample quantiles at
/// `k / bins`.
pub fn equiprobable_from_sample(mut data: Vec<f64>, bins: usize) -> Result<QuantileFunction<f64>> {
    if data.len() < 2 || bins < 1 {
        return Err(Error::InvalidConfig(
            "need at least two values and one bin".into(),
        ));
    }
    data.sort_by(f64::total_cmp);
    let knots: Vec<f64> = (0..=bins)
        .map(|k| sample_quantile(&data, k as f64 / bins as f64))
        .collect();
    let cum = (1..=bins).map(|k| k as f64 / bins as f64).collect();
    let c = knots.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let r = knots.windows(2).map(|w| 0.5 * (w[1] - w[0])).collect();
    QuantileFunction::new(cum, c, r)
}

pub fn gen_predictor_unit<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    bins: usize,
    microdata_n: usize,
    rng: &mut R,
) -> Result<QuantileFunction<f64>> {
    equiprobable_from_sample(spec.sample_unit(microdata_n, rng), bins)
}

/// The disturbance-free response.
pub fn perfect_response(
    params: &DsdCoefficients<f64>,
    xs: &[QuantileFunction<f64>],
) -> Result<QuantileFunction<f64>> {
    params.predict(xs)
}

/// Continuous piecewise-linear curve: piece 1 has center `a1` and
/// half-range `b_1`; every later piece starts where the previous one ended.
pub fn error_curve(a1: f64, bs: &[f64], cum_weights: &[f64]) -> Result<PiecewiseLinear<f64>> {
    if bs.len() != cum_weights.len() {
        return Err(Error::LengthMismatch {
            what: "error half-ranges",
            expected: cum_weights.len(),
            found: bs.len(),
        });
    }
    let mut centers = Vec::with_capacity(bs.len());
    let mut shift = a1;
    for (i, &b) in bs.iter().enumerate() {
        if i > 0 {
            shift += bs[i - 1] + b;
        }
        centers.push(shift);
    }
    PiecewiseLinear::new(cum_weights.to_vec(), centers, bs.to_vec())
}

/// Column statistics that scale the disturbance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnStats {
    /// Mean over pieces of the absolute column-mean center.
    pub c_ddot: f64,
    /// Smallest half-range in the column.
    pub min_r: f64,
}

impl ColumnStats {
    pub fn of(col: &[QuantileFunction<f64>]) -> Self {
        let n = col[0].len();
        let m = col.len() as f64;
        let c_ddot = (0..n)
            .map(|i| (col.iter().map(|q| q.centers()[i]).sum::<f64>() / m).abs())
            .sum::<f64>()
            / n as f64;
        let min_r = col
            .iter()
            .flat_map(|q| q.half_ranges().iter().copied())
            .fold(f64::INFINITY, f64::min);
        Self { c_ddot, min_r }
    }
}

fn symmetric_uniform<R: Rng + ?Sized>(half_width: f64, rng: &mut R) -> f64 {
    if half_width > 0.0 {
        rng.random_range(-half_width..=half_width)
    } else {
        0.0
    }
}

/// Adds a random error curve to `y_star`. Half-range shifts are clamped so
/// that no half-range turns negative.
pub fn perturb<R: Rng + ?Sized>(
    y_star: &QuantileFunction<f64>,
    level: LinearityLevel,
    stats: ColumnStats,
    rng: &mut R,
) -> Result<QuantileFunction<f64>> {
    let a1 = symmetric_uniform(level.center_factor() * stats.c_ddot, rng);
    let width = level.range_factor() * stats.min_r.max(0.0);
    let bs: Vec<f64> = y_star
        .half_ranges()
        .iter()
        .map(|&r| symmetric_uniform(width, rng).max(-r))
        .collect();
    let e = error_curve(a1, &bs, y_star.cum_weights())?;
    QuantileFunction::try_from(y_star.as_piecewise().add(&e))
}

/// Generates one table of `cfg.m` units.
pub fn simulate_table<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    rng: &mut R,
) -> Result<SymbolicTable<f64>> {
    let params = cfg.true_params.coefficients()?;
    let xs: Vec<Vec<QuantileFunction<f64>>> = cfg
        .distributions
        .iter()
        .map(|spec| {
            (0..cfg.m)
                .map(|_| gen_predictor_unit(spec, cfg.bins, cfg.microdata_n, rng))
                .collect()
        })
        .collect::<Result<_>>()?;
    let y_star: Vec<QuantileFunction<f64>> = (0..cfg.m)
        .map(|j| {
            let unit: Vec<_> = xs.iter().map(|col| col[j].clone()).collect();
            perfect_response(&params, &unit)
        })
        .collect::<Result<_>>()?;
    let stats = ColumnStats::of(&y_star);
    let y = y_star
        .iter()
        .map(|q| perturb(q, cfg.linearity, stats, rng))
        .collect::<Result<Vec<_>>>()?;
    let labels = (1..=cfg.m).map(|j| j.to_string()).collect();
    SymbolicTable::new(labels, y, xs)
}

/// The RNG of replication `index`.
pub fn replication_rng(base_seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(index as u64))
}

/// Everything one replication produces.
#[derive(Debug, Clone)]
pub struct Replication {
    pub table: SymbolicTable<f64>,
    pub model: DsdModel<f64>,
    pub predicted: VariableColumn<f64>,
    pub rmse_m: f64,
    pub rmse_l: f64,
    pub rmse_u: f64,
}

pub fn run_replication(cfg: &ExperimentConfig, index: usize) -> Result<Replication> {
    let mut rng = replication_rng(cfg.base_seed, index);
    let table = simulate_table(cfg, &mut rng)?;
    let model = fit(&table)?;
    let predicted = model.predict_table(&table)?;
    let rm = rmse_m(table.response(), &predicted)?;
    let (rl, ru) = rmse_bounds(table.response(), &predicted)?;
    Ok(Replication {
        table,
        model,
        predicted,
        rmse_m: rm,
        rmse_l: rl,
        rmse_u: ru,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
}

impl Moments {
    fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Self {
                mean: f64::NAN,
                sd: f64::NAN,
            };
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, sd }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    pub name: String,
    pub true_value: f64,
    pub mean: f64,
    pub sd: f64,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub replications: usize,
    /// Replications whose fit failed; they are left out of every statistic.
    pub failures: usize,
    pub parameters: Vec<ParameterSummary>,
    pub omega: Moments,
    pub rmse_m: Moments,
    pub rmse_l: Moments,
    pub rmse_u: Moments,
}

impl ExperimentSummary {
    pub fn parameter(&self, name: &str) -> Option<&ParameterSummary> {
        self.parameters.iter().find(|p| p.name == name)
    }
}

fn parameter_names(p: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(2 * p + 1);
    for k in 1..=p {
        names.push(format!("alpha{k}"));
        names.push(format!("beta{k}"));
    }
    names.push("gamma".into());
    names
}

/// Runs every replication (in parallel on the current rayon pool) and
/// aggregates in replication order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    struct Outcome {
        b: Vec<f64>,
        omega: f64,
        rmse: [f64; 3],
    }
    let outcomes: Vec<Result<Outcome>> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            run_replication(cfg, r).map(|rep| Outcome {
                b: rep.model.coefficients.to_vector(),
                omega: rep.model.omega,
                rmse: [rep.rmse_m, rep.rmse_l, rep.rmse_u],
            })
        })
        .collect();
    let ok: Vec<&Outcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let truth = cfg.true_params.to_vector();
    let parameters = parameter_names(cfg.p())
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            let vals: Vec<f64> = ok.iter().map(|o| o.b[i]).collect();
            let mom = Moments::of(&vals);
            let mse = if vals.is_empty() {
                f64::NAN
            } else {
                vals.iter().map(|v| (v - truth[i]).powi(2)).sum::<f64>() / vals.len() as f64
            };
            ParameterSummary {
                name,
                true_value: truth[i],
                mean: mom.mean,
                sd: mom.sd,
                mse,
            }
        })
        .collect();
    let column =
        |f: &dyn Fn(&Outcome) -> f64| Moments::of(&ok.iter().map(|o| f(o)).collect::<Vec<_>>());
    Ok(ExperimentSummary {
        replications: cfg.replications,
        failures: outcomes.len() - ok.len(),
        parameters,
        omega: column(&|o| o.omega),
        rmse_m: column(&|o| o.rmse[0]),
        rmse_l: column(&|o| o.rmse[1]),
        rmse_u: column(&|o| o.rmse[2]),
    })
}

/// Mean minus median of a distribution; positive for right skew.
pub fn mean_median_gap(q: &QuantileFunction<f64>) -> f64 {
    q.mean() - q.eval(0.5).expect("0.5 lies in [0, 1]")
}
