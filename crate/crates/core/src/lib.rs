//! Linear regression between histogram-valued variables.
//!
//! Histogram values are handled through their quantile functions. A response
//! is modelled as a nonnegative combination of each predictor's quantile
//! function and of the quantile function of its mirror image, plus a free
//! intercept, fitted by minimising the summed squared Mallows distance.
//!
//! ```
//! use histreg::{fit, Histogram, Quantile, Table};
//!
//! let x: Vec<Quantile> = (0..5)
//!     .map(|j| Histogram::interval(j as f64, j as f64 + 1.0 + 0.2 * j as f64).unwrap().to_quantile().unwrap())
//!     .collect();
//! let y: Vec<Quantile> = x.iter().map(|q| q.scale_nonneg(2.0).unwrap().shift(1.0)).collect();
//! let labels = (0..5).map(|j| j.to_string()).collect();
//! let model = fit(&Table::new(labels, y, vec![x]).unwrap()).unwrap();
//! assert!((model.alphas()[0] - 2.0).abs() < 1e-8);
//! ```

pub mod dsd;
pub mod error;
pub mod histcore;
pub mod metrics;
pub mod nnqp;
pub mod scalar;
pub mod simgen;

pub use dsd::{
    baseline_predict_bd, baseline_predict_vi, build_qp, error_function, fit, gradient_se, omega,
    DsdCoefficients, DsdModel, SymbolicTable,
};
pub use error::{Error, Result};
pub use histcore::{rewrite_common, HistogramValue, PiecewiseLinear, QuantileFunction};
pub use metrics::{
    mallows_sq, mallows_sq_to_scalar, mean_quantile, rmse_bounds, rmse_m, symbolic_mean,
    wasserstein, VariableColumn,
};
pub use nnqp::{kkt_check, solve, QpProblem, QpSolution, SolveOptions};
pub use scalar::Scalar;

/// Version of this library.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Histogram = HistogramValue<f64>;
pub type Quantile = QuantileFunction<f64>;
pub type Piecewise = PiecewiseLinear<f64>;
pub type Column = VariableColumn<f64>;
pub type Table = SymbolicTable<f64>;
pub type Model = DsdModel<f64>;
pub type Coefficients = DsdCoefficients<f64>;
pub type Problem = QpProblem<f64>;

pub type Histogram32 = HistogramValue<f32>;
pub type Quantile32 = QuantileFunction<f32>;
pub type Table32 = SymbolicTable<f32>;
pub type Model32 = DsdModel<f32>;
