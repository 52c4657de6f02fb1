//! Report documents written by the commands.

use histreg::simgen::{ExperimentConfig, ExperimentSummary};
use histreg::{Coefficients, Quantile};
use serde::{Deserialize, Serialize};

use crate::dataset::HistogramRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientsRecord {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub gamma: f64,
}

impl CoefficientsRecord {
    pub fn from_coefficients(c: &Coefficients) -> Self {
        Self {
            alphas: c.alphas.clone(),
            betas: c.betas.clone(),
            gamma: c.gamma,
        }
    }

    pub fn to_coefficients(&self) -> Result<Coefficients, histreg::Error> {
        Coefficients::new(self.alphas.clone(), self.betas.clone(), self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmseRecord {
    pub m: f64,
    pub l: f64,
    pub u: f64,
}

impl RmseRecord {
    /// Aggregates per-unit errors the way the column-wide measures do: root
    /// of the mean squared distance for `m`, plain means for the bounds.
    pub fn aggregate(units: &[RmseRecord]) -> Option<Self> {
        if units.is_empty() {
            return None;
        }
        let n = units.len() as f64;
        Some(Self {
            m: (units.iter().map(|r| r.m * r.m).sum::<f64>() / n).sqrt(),
            l: units.iter().map(|r| r.l).sum::<f64>() / n,
            u: units.iter().map(|r| r.u).sum::<f64>() / n,
        })
    }

    pub fn of_unit(observed: &Quantile, predicted: &Quantile) -> Self {
        let (l, u) = histreg::metrics::unit_bound_errors(observed, predicted);
        Self {
            m: histreg::mallows_sq(observed, predicted).max(0.0).sqrt(),
            l,
            u,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitPrediction {
    pub label: String,
    pub predicted: HistogramRecord,
    /// Present when the observed response is known.
    pub rmse: Option<RmseRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema: u32,
    pub version: String,
    pub response: String,
    pub predictors: Vec<String>,
    pub equiprobable: Option<usize>,
    pub excluded_units: Vec<String>,
    pub partition: Vec<f64>,
    pub coefficients: CoefficientsRecord,
    pub omega: f64,
    pub se: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub regularized: bool,
    pub rmse: RmseRecord,
    pub units: Vec<UnitPrediction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub schema: u32,
    pub version: String,
    pub response: String,
    pub predictors: Vec<String>,
    pub units: Vec<UnitPrediction>,
    pub rmse: Option<RmseRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub schema: u32,
    pub version: String,
    pub config: ExperimentConfig,
    pub summary: ExperimentSummary,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

/// `x` with 12 significant digits, trailing zeros removed.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').expect("scientific format");
        format!("{}e{e}", trim(mant.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(123456.789), "123456.789");
        assert_eq!(format_sig12(2.0e-9), "2e-9");
        assert_eq!(format_sig12(-1.0 / 12.0), "-0.0833333333333");
    }

    #[test]
    fn aggregate_matches_column_measures() {
        let r = RmseRecord::aggregate(&[
            RmseRecord {
                m: 3.0,
                l: 1.0,
                u: 2.0,
            },
            RmseRecord {
                m: 4.0,
                l: 3.0,
                u: 2.0,
            },
        ])
        .unwrap();
        assert!((r.m - 12.5f64.sqrt()).abs() < 1e-15);
        assert_eq!((r.l, r.u), (2.0, 2.0));
    }
}
