use crate::error::{Error, Result};
use crate::histcore::QuantileFunction;
use crate::scalar::Scalar;

/// Tolerance on the total weight of a histogram.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// An empirical distribution given as ordered, weighted subintervals.
///
/// Zero-weight bins are kept as given; they are only dropped when the value is
/// turned into a quantile function.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramValue<T> {
    bins: Vec<(T, T)>,
    weights: Vec<T>,
}

impl<T: Scalar> HistogramValue<T> {
    pub fn new(bins: Vec<(T, T)>, weights: Vec<T>) -> Result<Self> {
        match Self::violations(&bins, &weights).into_iter().next() {
            Some(e) => Err(e),
            None => Ok(Self { bins, weights }),
        }
    }

    /// A single interval `[lo, hi]` with weight one.
    pub fn interval(lo: T, hi: T) -> Result<Self> {
        Self::new(vec![(lo, hi)], vec![T::one()])
    }

    /// Every invariant violation of the given bins and weights, in bin order.
    pub fn violations(bins: &[(T, T)], weights: &[T]) -> Vec<Error> {
        let mut out = Vec::new();
        if bins.is_empty() {
            out.push(Error::EmptyHistogram);
            return out;
        }
        if bins.len() != weights.len() {
            out.push(Error::LengthMismatch {
                what: "weights",
                expected: bins.len(),
                found: weights.len(),
            });
            return out;
        }
        for (i, &(lo, hi)) in bins.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                out.push(Error::UnboundedBin { index: i });
                continue;
            }
            let after_prev = i == 0 || {
                let prev_hi = bins[i - 1].1;
                !prev_hi.is_finite() || prev_hi <= lo
            };
            if lo > hi || !after_prev {
                out.push(Error::NonOrderedBins { index: i });
            }
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w >= T::zero()) || !w.is_finite() {
                out.push(Error::NegativeWeight {
                    index: i,
                    weight: w.as_f64(),
                });
            }
        }
        let sum: T = weights.iter().copied().sum();
        if !((sum - T::one()).abs() <= T::tol(WEIGHT_SUM_TOL)) {
            out.push(Error::WeightSumNotOne { sum: sum.as_f64() });
        }
        out
    }

    pub fn bins(&self) -> &[(T, T)] {
        &self.bins
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Mean of the piecewise-uniform distribution.
    pub fn mean(&self) -> T {
        let half = T::lit(0.5);
        self.bins
            .iter()
            .zip(&self.weights)
            .map(|(&(lo, hi), &w)| w * (lo + hi) * half)
            .sum()
    }

    pub fn to_quantile(&self) -> Result<QuantileFunction<T>> {
        QuantileFunction::from_histogram(self)
    }

    pub(crate) fn from_parts(bins: Vec<(T, T)>, weights: Vec<T>) -> Self {
        Self { bins, weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one_is_valid() {
        let h = HistogramValue::new(
            vec![(1.0, 3.0), (3.0, 5.0), (5.0, 8.0)],
            vec![0.1, 0.6, 0.3],
        );
        assert!(h.is_ok());
        assert!((h.unwrap().mean() - 4.55f64).abs() < 1e-12);
    }

    #[test]
    fn degenerate_interval() {
        assert!(HistogramValue::<f64>::interval(0.0, 1.0).is_ok());
        assert!(HistogramValue::<f64>::interval(2.0, 2.0).is_ok());
    }

    #[test]
    fn rejects_each_invariant() {
        let e = |b: Vec<(f64, f64)>, w: Vec<f64>| HistogramValue::new(b, w).unwrap_err();
        assert_eq!(
            e(vec![(3.0, 5.0), (1.0, 3.0)], vec![0.5, 0.5]),
            Error::NonOrderedBins { index: 1 }
        );
        assert_eq!(
            e(vec![(2.0, 1.0)], vec![1.0]),
            Error::NonOrderedBins { index: 0 }
        );
        assert!(matches!(
            e(vec![(0.0, 1.0), (1.0, 2.0)], vec![1.2, -0.2]),
            Error::NegativeWeight { index: 1, .. }
        ));
        assert!(matches!(
            e(vec![(0.0, 1.0)], vec![0.9]),
            Error::WeightSumNotOne { .. }
        ));
        assert_eq!(
            e(vec![(60.0, f64::INFINITY)], vec![1.0]),
            Error::UnboundedBin { index: 0 }
        );
        assert_eq!(e(vec![], vec![]), Error::EmptyHistogram);
    }

    #[test]
    fn violations_reports_everything() {
        let v = HistogramValue::violations(&[(3.0, 1.0), (0.0, 1.0)], &[0.5, 0.2]);
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn zero_weights_are_stored() {
        let h = HistogramValue::new(
            vec![(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)],
            vec![0.5, 0.0, 0.5],
        )
        .unwrap();
        assert_eq!(h.len(), 3);
        assert_eq!(h.to_quantile().unwrap().len(), 2);
    }
}
