//! Distances between quantile functions, symbolic means and RMSE measures.

use crate::error::{Error, Result};
use crate::histcore::{partition, rewrite_common, PiecewiseLinear, QuantileFunction};
use crate::scalar::{third, two, Scalar};

/// A histogram-valued variable: one quantile function per unit, all on the
/// same partition.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableColumn<T> {
    units: Vec<QuantileFunction<T>>,
    cum: Vec<T>,
}

impl<T: Scalar> VariableColumn<T> {
    /// Rewrites `units` onto the union of their partitions.
    pub fn new(units: Vec<QuantileFunction<T>>) -> Result<Self> {
        if units.is_empty() {
            return Err(Error::EmptyTable);
        }
        let units = rewrite_common(&units);
        let cum = units[0].cum_weights().to_vec();
        Ok(Self { units, cum })
    }

    /// Rewrites `units` onto `grid`, which must refine every unit's partition.
    pub fn on_partition(units: &[QuantileFunction<T>], grid: &[T]) -> Result<Self> {
        if units.is_empty() {
            return Err(Error::EmptyTable);
        }
        for q in units {
            if !partition::is_refinement(grid, q.cum_weights()) {
                return Err(Error::InvalidPartition(
                    "grid does not contain every breakpoint".into(),
                ));
            }
        }
        Ok(Self {
            units: units.iter().map(|q| q.on_partition(grid)).collect(),
            cum: grid.to_vec(),
        })
    }

    pub fn units(&self) -> &[QuantileFunction<T>] {
        &self.units
    }

    pub fn cum_weights(&self) -> &[T] {
        &self.cum
    }

    pub fn weights(&self) -> Vec<T> {
        partition::piece_weights(&self.cum)
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

/// Squared Mallows (L2 Wasserstein) distance, `∫₀¹ (a - b)² dt`.
pub fn mallows_sq<T: Scalar>(
    a: &impl AsRef<PiecewiseLinear<T>>,
    b: &impl AsRef<PiecewiseLinear<T>>,
) -> T {
    a.as_ref().sub(b.as_ref()).norm_sq()
}

/// L1 Wasserstein distance, `∫₀¹ |a - b| dt`, integrated exactly per piece.
pub fn wasserstein<T: Scalar>(
    a: &impl AsRef<PiecewiseLinear<T>>,
    b: &impl AsRef<PiecewiseLinear<T>>,
) -> T {
    let d = a.as_ref().sub(b.as_ref());
    d.weights()
        .iter()
        .zip(d.centers().iter().zip(d.half_ranges()))
        .map(|(&p, (&c, &r))| abs_linear_mean(c, r) * p)
        .sum()
}

/// Mean of `|c + s r|` for `s` uniform on `[-1, 1]`.
fn abs_linear_mean<T: Scalar>(c: T, r: T) -> T {
    let (a, b) = (c.abs(), r.abs());
    if a >= b {
        a
    } else {
        (a * a + b * b) / (two::<T>() * b)
    }
}

/// `∫₀¹ (q(t) - c)² dt`.
pub fn mallows_sq_to_scalar<T: Scalar>(q: &impl AsRef<PiecewiseLinear<T>>, c: T) -> T {
    let q = q.as_ref();
    q.weights()
        .iter()
        .zip(q.centers().iter().zip(q.half_ranges()))
        .map(|(&p, (&ci, &ri))| p * ((ci - c) * (ci - c) + third::<T>() * ri * ri))
        .sum()
}

/// Mean of a histogram-valued variable: the average of the unit means.
pub fn symbolic_mean<T: Scalar>(col: &VariableColumn<T>) -> T {
    let w = col.weights();
    let m = T::lit(col.len() as f64);
    let total: T = col
        .units()
        .iter()
        .map(|q| w.iter().zip(q.centers()).map(|(&p, &c)| p * c).sum::<T>())
        .sum();
    total / m
}

/// Quantile function of the barycentric histogram: the piecewise average.
pub fn mean_quantile<T: Scalar>(col: &VariableColumn<T>) -> QuantileFunction<T> {
    let n = col.cum_weights().len();
    let m = T::lit(col.len() as f64);
    let mut c = vec![T::zero(); n];
    let mut r = vec![T::zero(); n];
    for q in col.units() {
        for i in 0..n {
            c[i] = c[i] + q.centers()[i];
            r[i] = r[i] + q.half_ranges()[i];
        }
    }
    let c = c.into_iter().map(|v| v / m).collect();
    let r = r.into_iter().map(|v| v / m).collect();
    QuantileFunction::new(col.cum_weights().to_vec(), c, r)
        .expect("an average of quantile functions is a quantile function")
}

fn check_lengths<T: Scalar>(
    observed: &VariableColumn<T>,
    predicted: &VariableColumn<T>,
) -> Result<()> {
    if observed.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            what: "predicted units",
            expected: observed.len(),
            found: predicted.len(),
        });
    }
    Ok(())
}

/// `sqrt(Σ_j ∫ (ŷ_j - y_j)² / m)`.
pub fn rmse_m<T: Scalar>(observed: &VariableColumn<T>, predicted: &VariableColumn<T>) -> Result<T> {
    check_lengths(observed, predicted)?;
    let m = T::lit(observed.len() as f64);
    let total: T = observed
        .units()
        .iter()
        .zip(predicted.units())
        .map(|(y, yh)| mallows_sq(y, yh))
        .sum();
    Ok((total / m).sqrt())
}

/// Lower- and upper-bound RMSE: the average over units of the weighted root
/// mean square difference of bin bounds.
pub fn rmse_bounds<T: Scalar>(
    observed: &VariableColumn<T>,
    predicted: &VariableColumn<T>,
) -> Result<(T, T)> {
    check_lengths(observed, predicted)?;
    let m = T::lit(observed.len() as f64);
    let mut sum_l = T::zero();
    let mut sum_u = T::zero();
    for (y, yh) in observed.units().iter().zip(predicted.units()) {
        let (l, u) = unit_bound_errors(y, yh);
        sum_l = sum_l + l;
        sum_u = sum_u + u;
    }
    Ok((sum_l / m, sum_u / m))
}

/// `(sqrt(Σ_i p_i (lo_i - lô_i)²), sqrt(Σ_i p_i (hi_i - hî_i)²))` for one unit.
pub fn unit_bound_errors<T: Scalar>(y: &QuantileFunction<T>, yh: &QuantileFunction<T>) -> (T, T) {
    let grid = partition::union([y.cum_weights(), yh.cum_weights()]);
    let a = y.on_partition(&grid);
    let b = yh.on_partition(&grid);
    let w = partition::piece_weights(&grid);
    let mut l = T::zero();
    let mut u = T::zero();
    for (i, &p) in w.iter().enumerate() {
        let dl = a.piece_start(i) - b.piece_start(i);
        let du = a.piece_end(i) - b.piece_end(i);
        l = l + p * dl * dl;
        u = u + p * du * du;
    }
    (l.sqrt(), u.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histcore::HistogramValue;
    use approx::assert_abs_diff_eq;

    fn hx() -> QuantileFunction<f64> {
        HistogramValue::new(
            vec![(1.0, 3.0), (3.0, 5.0), (5.0, 8.0)],
            vec![0.1, 0.6, 0.3],
        )
        .unwrap()
        .to_quantile()
        .unwrap()
    }

    fn unit() -> QuantileFunction<f64> {
        QuantileFunction::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn trivial_distances() {
        let q = hx();
        assert_eq!(mallows_sq(&q, &q), 0.0);
        assert_eq!(wasserstein(&q, &q), 0.0);
        let a = unit();
        let b = a.shift(1.0);
        assert_abs_diff_eq!(mallows_sq(&a, &b), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wasserstein(&a, &b), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn wasserstein_with_sign_change() {
        // t versus 1 - t; the second is not monotone but the distance is defined.
        let a = unit();
        let b = PiecewiseLinear::new(vec![1.0], vec![0.5], vec![-0.5]).unwrap();
        assert_abs_diff_eq!(wasserstein(&a, &b), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn scalar_distance() {
        assert_abs_diff_eq!(
            mallows_sq_to_scalar(&unit(), 0.5),
            1.0 / 12.0,
            epsilon = 1e-15
        );
        assert_eq!(
            mallows_sq_to_scalar(&QuantileFunction::constant(3.0), 3.0),
            0.0
        );
    }

    #[test]
    fn means() {
        let col = VariableColumn::new(vec![hx()]).unwrap();
        assert_abs_diff_eq!(symbolic_mean(&col), 4.55, epsilon = 1e-12);
        let col = VariableColumn::new(vec![unit(), unit().shift(2.0)]).unwrap();
        let mq = mean_quantile(&col);
        assert_abs_diff_eq!(mq.centers()[0], 1.5);
        assert_abs_diff_eq!(mq.half_ranges()[0], 0.5);
    }

    #[test]
    fn rmse_of_shifted_prediction() {
        let y = VariableColumn::new(vec![unit()]).unwrap();
        let yh = VariableColumn::new(vec![unit().shift(1.0)]).unwrap();
        assert_abs_diff_eq!(rmse_m(&y, &yh).unwrap(), 1.0, epsilon = 1e-15);
        let (l, u) = rmse_bounds(&y, &yh).unwrap();
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u, 1.0, epsilon = 1e-15);
        assert_eq!(rmse_bounds(&y, &y).unwrap(), (0.0, 0.0));
        let two = VariableColumn::new(vec![unit(), unit()]).unwrap();
        assert!(rmse_m(&y, &two).is_err());
    }
}
