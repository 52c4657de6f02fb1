//! Dataset files: JSON documents holding one histogram per unit and variable.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use histreg::{Histogram, HistogramValue, Quantile};
use serde::{Deserialize, Serialize};

use crate::{Failure, SCHEMA};

/// A histogram as stored on disk. A `null` bound stands for an open-ended
/// bin, which is reported and rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramRecord {
    pub bins: Vec<[Option<f64>; 2]>,
    pub weights: Vec<f64>,
}

impl HistogramRecord {
    pub fn from_histogram(h: &Histogram) -> Self {
        Self {
            bins: h
                .bins()
                .iter()
                .map(|&(lo, hi)| [Some(lo), Some(hi)])
                .collect(),
            weights: h.weights().to_vec(),
        }
    }

    fn raw(&self) -> (Vec<(f64, f64)>, Vec<f64>) {
        let bins = self
            .bins
            .iter()
            .map(|[lo, hi]| (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY)))
            .collect();
        (bins, self.weights.clone())
    }

    pub fn issues(&self) -> Vec<histreg::Error> {
        let (bins, weights) = self.raw();
        HistogramValue::violations(&bins, &weights)
    }

    pub fn to_histogram(&self) -> Result<Histogram, histreg::Error> {
        let (bins, weights) = self.raw();
        HistogramValue::new(bins, weights)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitRecord {
    pub label: String,
    pub values: BTreeMap<String, HistogramRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub schema: u32,
    pub variables: Vec<String>,
    pub units: Vec<UnitRecord>,
}

/// One invariant violation, located by unit and variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub unit: Option<String>,
    pub variable: Option<String>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.unit, &self.variable) {
            (Some(u), Some(v)) => write!(f, "unit {u:?}, variable {v:?}: {}", self.message),
            (Some(u), None) => write!(f, "unit {u:?}: {}", self.message),
            (None, Some(v)) => write!(f, "variable {v:?}: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl DatasetFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, Failure> {
        serde_json::from_str(text)
            .map_err(|e| Failure::input(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
    }

    /// Reads a file without checking histogram invariants.
    pub fn read(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Reads a file and rejects it unless it is free of issues.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let ds = Self::read(path)?;
        let issues = ds.issues();
        if !issues.is_empty() {
            let lines: Vec<String> = issues.iter().map(|i| i.to_string()).collect();
            return Err(Failure::input(format!(
                "{}: {} issue(s)\n{}",
                path.display(),
                issues.len(),
                lines.join("\n")
            )));
        }
        Ok(ds)
    }

    pub fn issues(&self) -> Vec<Issue> {
        let mut out = Vec::new();
        let issue = |unit: Option<&str>, var: Option<&str>, message: String| Issue {
            unit: unit.map(str::to_owned),
            variable: var.map(str::to_owned),
            message,
        };
        if self.schema != SCHEMA {
            out.push(issue(
                None,
                None,
                format!("unsupported schema {}, expected {SCHEMA}", self.schema),
            ));
        }
        if self.units.is_empty() {
            out.push(issue(None, None, "no units".into()));
        }
        let mut seen = BTreeMap::new();
        for (k, v) in self.variables.iter().enumerate() {
            if seen.insert(v.as_str(), k).is_some() {
                out.push(issue(None, Some(v), "declared twice".into()));
            }
        }
        let mut labels = BTreeMap::new();
        for u in &self.units {
            if labels.insert(u.label.as_str(), ()).is_some() {
                out.push(issue(Some(&u.label), None, "duplicate label".into()));
            }
            for v in &self.variables {
                match u.values.get(v) {
                    None => out.push(issue(Some(&u.label), Some(v), "missing value".into())),
                    Some(rec) => {
                        for e in rec.issues() {
                            out.push(issue(Some(&u.label), Some(v), e.to_string()));
                        }
                    }
                }
            }
            for v in u.values.keys() {
                if !seen.contains_key(v.as_str()) {
                    out.push(issue(
                        Some(&u.label),
                        Some(v),
                        "variable not declared".into(),
                    ));
                }
            }
        }
        out
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.variables.iter().any(|v| v == name)
    }

    pub fn require_variable(&self, name: &str) -> Result<(), Failure> {
        if self.has_variable(name) {
            Ok(())
        } else {
            Err(Failure::input(format!(
                "unknown variable {name:?}; the dataset has {:?}",
                self.variables
            )))
        }
    }

    pub fn unit(&self, label: &str) -> Result<&UnitRecord, Failure> {
        self.units
            .iter()
            .find(|u| u.label == label)
            .ok_or_else(|| Failure::input(format!("unknown unit {label:?}")))
    }

    /// Units with the given labels, in dataset order; all when `None`.
    pub fn select(&self, labels: Option<&[String]>) -> Result<Vec<&UnitRecord>, Failure> {
        match labels {
            None => Ok(self.units.iter().collect()),
            Some(ls) => {
                for l in ls {
                    self.unit(l)?;
                }
                Ok(self
                    .units
                    .iter()
                    .filter(|u| ls.contains(&u.label))
                    .collect())
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }
}

/// Quantile function of `unit`'s value of `var`, optionally requantized to
/// `k` equal-weight pieces.
pub fn quantile_of(
    unit: &UnitRecord,
    var: &str,
    equiprobable: Option<usize>,
) -> Result<Quantile, Failure> {
    let rec = unit
        .values
        .get(var)
        .ok_or_else(|| Failure::input(format!("unit {:?} has no value for {var:?}", unit.label)))?;
    let located =
        |e: histreg::Error| Failure::input(format!("unit {:?}, variable {var:?}: {e}", unit.label));
    let q = rec
        .to_histogram()
        .and_then(|h| h.to_quantile())
        .map_err(located)?;
    match equiprobable {
        Some(k) => q.requantize(k).map_err(located),
        None => Ok(q),
    }
}

/// Converts rows `unit, variable, q0, ..., qK` of quantile knots into a
/// dataset whose values have `K` equal-weight bins. The first row is a header.
pub fn import_csv(text: &str) -> Result<DatasetFile, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut variables: Vec<String> = Vec::new();
    let mut units: Vec<UnitRecord> = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| Failure::input(format!("line {line}: {e}")))?;
        if rec.len() < 4 {
            return Err(Failure::input(format!(
                "line {line}: need a unit, a variable and at least two knots"
            )));
        }
        let knots = rec
            .iter()
            .skip(2)
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| Failure::input(format!("line {line}: bad knot {s:?}: {e}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let k = knots.len() - 1;
        let record = HistogramRecord {
            bins: knots.windows(2).map(|w| [Some(w[0]), Some(w[1])]).collect(),
            weights: vec![1.0 / k as f64; k],
        };
        let (label, var) = (rec[0].to_owned(), rec[1].to_owned());
        if !variables.contains(&var) {
            variables.push(var.clone());
        }
        let idx = match units.iter().position(|u| u.label == label) {
            Some(i) => i,
            None => {
                units.push(UnitRecord {
                    label,
                    values: BTreeMap::new(),
                });
                units.len() - 1
            }
        };
        if units[idx].values.insert(var.clone(), record).is_some() {
            return Err(Failure::input(format!(
                "line {line}: unit {:?} repeats variable {var:?}",
                units[idx].label
            )));
        }
    }
    Ok(DatasetFile {
        schema: SCHEMA,
        variables,
        units,
    })
}
