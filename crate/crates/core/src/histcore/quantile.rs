use std::ops::Deref;

use crate::error::{Error, Result};
use crate::histcore::histogram::HistogramValue;
use crate::histcore::partition::{self, BREAKPOINT_TOL};
use crate::histcore::PiecewiseLinear;
use crate::scalar::{two, Scalar};

/// Tolerance for the non-decreasing check between consecutive pieces.
pub const MONOTONE_TOL: f64 = 1e-9;

/// A non-decreasing [`PiecewiseLinear`] function: the quantile function of a
/// piecewise-uniform distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFunction<T>(PiecewiseLinear<T>);

impl<T: Scalar> Deref for QuantileFunction<T> {
    type Target = PiecewiseLinear<T>;

    fn deref(&self) -> &PiecewiseLinear<T> {
        &self.0
    }
}

impl<T: Scalar> AsRef<PiecewiseLinear<T>> for QuantileFunction<T> {
    fn as_ref(&self) -> &PiecewiseLinear<T> {
        &self.0
    }
}

impl<T: Scalar> TryFrom<PiecewiseLinear<T>> for QuantileFunction<T> {
    type Error = Error;

    fn try_from(f: PiecewiseLinear<T>) -> Result<Self> {
        if let Some(e) = f.monotonicity_violation(T::tol(MONOTONE_TOL)) {
            return Err(e);
        }
        let mut f = f;
        // Round-off can leave half-ranges a hair below zero.
        for r in f.half_ranges_mut() {
            if *r < T::zero() {
                *r = T::zero();
            }
        }
        Ok(Self(f))
    }
}

impl<T: Scalar> From<QuantileFunction<T>> for PiecewiseLinear<T> {
    fn from(q: QuantileFunction<T>) -> Self {
        q.0
    }
}

impl<T: Scalar> QuantileFunction<T> {
    pub fn new(cum_weights: Vec<T>, centers: Vec<T>, half_ranges: Vec<T>) -> Result<Self> {
        PiecewiseLinear::new(cum_weights, centers, half_ranges)?.try_into()
    }

    /// Uniform distribution on `[lo, hi]`.
    pub fn uniform(lo: T, hi: T) -> Result<Self> {
        let half = T::lit(0.5);
        Self::new(
            vec![T::one()],
            vec![(lo + hi) * half],
            vec![(hi - lo) * half],
        )
    }

    /// Point mass at `v`.
    pub fn constant(v: T) -> Self {
        Self(PiecewiseLinear::constant(v))
    }

    pub fn from_histogram(h: &HistogramValue<T>) -> Result<Self> {
        let half = T::lit(0.5);
        let mut cum = Vec::with_capacity(h.len());
        let mut centers = Vec::with_capacity(h.len());
        let mut half_ranges = Vec::with_capacity(h.len());
        let mut acc = T::zero();
        for (&(lo, hi), &w) in h.bins().iter().zip(h.weights()) {
            if w <= T::zero() {
                continue;
            }
            acc = acc + w;
            cum.push(acc);
            centers.push((lo + hi) * half);
            half_ranges.push((hi - lo) * half);
        }
        match cum.last_mut() {
            Some(last) => *last = T::one(),
            None => return Err(Error::AllWeightsZero),
        }
        Self::new(cum, centers, half_ranges)
    }

    pub fn as_piecewise(&self) -> &PiecewiseLinear<T> {
        &self.0
    }

    pub fn into_piecewise(self) -> PiecewiseLinear<T> {
        self.0
    }

    /// Lossless rewrite onto a finer partition.
    pub fn on_partition(&self, grid: &[T]) -> Self {
        Self(self.0.on_partition(grid))
    }

    /// Quantile function of the mirrored distribution, `t -> -q(1 - t)`.
    pub fn symmetric(&self) -> Self {
        Self(self.0.symmetric())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    /// `λ q` for `λ ≥ 0`. Negative factors reverse the order of the values
    /// and are only available on [`PiecewiseLinear`].
    pub fn scale_nonneg(&self, lambda: T) -> Result<Self> {
        if lambda < T::zero() {
            return Err(Error::NegativeSlopeUnsupported);
        }
        Ok(Self(self.0.scale(lambda)))
    }

    pub fn shift(&self, v: T) -> Self {
        Self(self.0.shift(v))
    }

    /// Mean of the distribution, `∫₀¹ q(t) dt`.
    pub fn mean(&self) -> T {
        self.integral()
    }

    pub fn to_histogram(&self) -> HistogramValue<T> {
        let n = self.len();
        let mut bins: Vec<(T, T)> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lo = self.piece_start(i);
            if let Some(&(_, prev_hi)) = bins.last() {
                if lo < prev_hi {
                    lo = prev_hi;
                }
            }
            let hi = self.piece_end(i).max(lo);
            bins.push((lo, hi));
        }
        HistogramValue::from_parts(bins, self.weights())
    }

    /// Value just right of `t`, with `t` snapped onto a nearby breakpoint.
    fn right_value(&self, t: T) -> T {
        let tol = T::tol(BREAKPOINT_TOL);
        let cum = self.cum_weights();
        match cum.iter().position(|&w| (w - t).abs() <= tol) {
            Some(j) if j + 1 < cum.len() => self.piece_start(j + 1),
            Some(j) => self.piece_end(j),
            None => self.eval(t).expect("t in [0, 1]"),
        }
    }

    /// Value just left of `t`, with `t` snapped onto a nearby breakpoint.
    fn left_value(&self, t: T) -> T {
        let tol = T::tol(BREAKPOINT_TOL);
        match self
            .cum_weights()
            .iter()
            .position(|&w| (w - t).abs() <= tol)
        {
            Some(j) => self.piece_end(j),
            None => self.eval_left(t).expect("t in [0, 1]"),
        }
    }

    /// Approximation by `k` equal-weight pieces; piece `i` runs from
    /// `q((i-1)/k)` to the left limit of `q` at `i/k`.
    pub fn requantize(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPartition("requantize needs k >= 1".into()));
        }
        let kk = T::lit(k as f64);
        let half = T::one() / two::<T>();
        let mut cum = Vec::with_capacity(k);
        let mut centers = Vec::with_capacity(k);
        let mut half_ranges = Vec::with_capacity(k);
        let mut start = self.piece_start(0);
        for i in 1..=k {
            let t = if i == k {
                T::one()
            } else {
                T::lit(i as f64) / kk
            };
            let end = self.left_value(t).max(start);
            cum.push(t);
            centers.push((start + end) * half);
            half_ranges.push((end - start) * half);
            if i < k {
                start = self.right_value(t);
            }
        }
        Self::new(cum, centers, half_ranges)
    }
}

/// The sorted union of the partitions of `fs`.
pub fn common_partition<'a, T, F>(fs: impl IntoIterator<Item = &'a F>) -> Vec<T>
where
    T: Scalar,
    F: AsRef<PiecewiseLinear<T>> + 'a,
{
    partition::union(fs.into_iter().map(|f| f.as_ref().cum_weights()))
}

/// Rewrites every input onto the union of their partitions.
pub fn rewrite_common<T: Scalar>(qs: &[QuantileFunction<T>]) -> Vec<QuantileFunction<T>> {
    let grid = common_partition(qs);
    qs.iter().map(|q| q.on_partition(&grid)).collect()
}
