//! Histogram values, quantile functions and their arithmetic.

mod histogram;
pub mod partition;
mod piecewise;
mod quantile;

pub use histogram::{HistogramValue, WEIGHT_SUM_TOL};
pub use piecewise::PiecewiseLinear;
pub use quantile::{common_partition, rewrite_common, QuantileFunction, MONOTONE_TOL};
