use crate::error::{Error, Result};
use crate::histcore::partition::{self, BREAKPOINT_TOL};
use crate::scalar::{third, two, Scalar};

/// A piecewise-linear function on `[0, 1]`.
///
/// Piece `i` covers `[w_{i-1}, w_i)` (the last piece also owns `t = 1`) and
/// is parameterised by its center `c_i` and half-range `r_i`:
/// `f(t) = c_i + (2 (t - w_{i-1}) / (w_i - w_{i-1}) - 1) r_i`.
/// No monotonicity is required; see [`QuantileFunction`](super::QuantileFunction).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear<T> {
    cum: Vec<T>,
    centers: Vec<T>,
    half_ranges: Vec<T>,
}

impl<T: Scalar> PiecewiseLinear<T> {
    pub fn new(cum_weights: Vec<T>, centers: Vec<T>, half_ranges: Vec<T>) -> Result<Self> {
        let n = cum_weights.len();
        if centers.len() != n {
            return Err(Error::LengthMismatch {
                what: "centers",
                expected: n,
                found: centers.len(),
            });
        }
        if half_ranges.len() != n {
            return Err(Error::LengthMismatch {
                what: "half_ranges",
                expected: n,
                found: half_ranges.len(),
            });
        }
        partition::validate(&cum_weights)?;
        let mut cum = cum_weights;
        cum[n - 1] = T::one();
        Ok(Self {
            cum,
            centers,
            half_ranges,
        })
    }

    pub(crate) fn from_parts(cum: Vec<T>, centers: Vec<T>, half_ranges: Vec<T>) -> Self {
        debug_assert_eq!(cum.len(), centers.len());
        debug_assert_eq!(cum.len(), half_ranges.len());
        Self {
            cum,
            centers,
            half_ranges,
        }
    }

    /// The constant function `v`.
    pub fn constant(v: T) -> Self {
        Self::from_parts(vec![T::one()], vec![v], vec![T::zero()])
    }

    /// The zero function on a given partition.
    pub fn zero_on(cum: &[T]) -> Self {
        Self::from_parts(
            cum.to_vec(),
            vec![T::zero(); cum.len()],
            vec![T::zero(); cum.len()],
        )
    }

    pub fn len(&self) -> usize {
        self.cum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cum.is_empty()
    }

    pub fn cum_weights(&self) -> &[T] {
        &self.cum
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn half_ranges(&self) -> &[T] {
        &self.half_ranges
    }

    pub fn weights(&self) -> Vec<T> {
        partition::piece_weights(&self.cum)
    }

    /// `(w_{i-1}, w_i)` for piece `i`.
    pub fn piece_span(&self, i: usize) -> (T, T) {
        let lo = if i == 0 { T::zero() } else { self.cum[i - 1] };
        (lo, self.cum[i])
    }

    /// Value at the start of piece `i`.
    pub fn piece_start(&self, i: usize) -> T {
        self.centers[i] - self.half_ranges[i]
    }

    /// Left limit at the end of piece `i`.
    pub fn piece_end(&self, i: usize) -> T {
        self.centers[i] + self.half_ranges[i]
    }

    fn piece_value(&self, i: usize, t: T) -> T {
        let (lo, hi) = self.piece_span(i);
        let u = (t - lo) / (hi - lo);
        self.centers[i] + (two::<T>() * u - T::one()) * self.half_ranges[i]
    }

    fn check_domain(t: T) -> Result<()> {
        if t >= T::zero() && t <= T::one() {
            Ok(())
        } else {
            Err(Error::OutOfDomain { t: t.as_f64() })
        }
    }

    /// Value at `t`, using the piece that contains `t` on its closed left side.
    pub fn eval(&self, t: T) -> Result<T> {
        Self::check_domain(t)?;
        let i = self.cum.partition_point(|&w| w <= t).min(self.len() - 1);
        Ok(self.piece_value(i, t))
    }

    /// Left limit at `t` (right limit at `t = 0`).
    pub fn eval_left(&self, t: T) -> Result<T> {
        Self::check_domain(t)?;
        let i = self.cum.partition_point(|&w| w < t).min(self.len() - 1);
        Ok(self.piece_value(i, t))
    }

    /// The same function expressed on `grid`, which must contain every
    /// breakpoint of `self`. Pieces coinciding with an existing piece keep
    /// their parameters bit for bit.
    pub fn on_partition(&self, grid: &[T]) -> Self {
        let tol = T::tol(BREAKPOINT_TOL);
        let mut centers = Vec::with_capacity(grid.len());
        let mut half_ranges = Vec::with_capacity(grid.len());
        let mut a = T::zero();
        let mut k = 0usize;
        for &b in grid {
            let mid = (a + b) / two::<T>();
            while k + 1 < self.len() && self.cum[k] <= mid {
                k += 1;
            }
            let (w0, w1) = self.piece_span(k);
            let (c, r) = (self.centers[k], self.half_ranges[k]);
            if (a - w0).abs() <= tol && (b - w1).abs() <= tol {
                centers.push(c);
                half_ranges.push(r);
            } else {
                let ua = (a - w0) / (w1 - w0);
                let ub = (b - w0) / (w1 - w0);
                centers.push(c + (ua + ub - T::one()) * r);
                half_ranges.push((ub - ua) * r);
            }
            a = b;
        }
        Self::from_parts(grid.to_vec(), centers, half_ranges)
    }

    /// The function `t -> -f(1 - t)`.
    pub fn symmetric(&self) -> Self {
        let cum = partition::reflect(&self.cum);
        let centers = self.centers.iter().rev().map(|&c| -c).collect();
        let half_ranges = self.half_ranges.iter().rev().copied().collect();
        Self::from_parts(cum, centers, half_ranges)
    }

    /// The function `t -> f(1 - t)` on the reflected partition.
    pub fn reflected(&self) -> Self {
        let cum = partition::reflect(&self.cum);
        let centers = self.centers.iter().rev().copied().collect();
        let half_ranges = self.half_ranges.iter().rev().map(|&r| -r).collect();
        Self::from_parts(cum, centers, half_ranges)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let grid = partition::union([self.cum_weights(), other.cum_weights()]);
        let a = self.on_partition(&grid);
        let b = other.on_partition(&grid);
        let centers = a
            .centers
            .iter()
            .zip(&b.centers)
            .map(|(&x, &y)| f(x, y))
            .collect();
        let half_ranges = a
            .half_ranges
            .iter()
            .zip(&b.half_ranges)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Self::from_parts(grid, centers, half_ranges)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn scale(&self, lambda: T) -> Self {
        Self::from_parts(
            self.cum.clone(),
            self.centers.iter().map(|&c| lambda * c).collect(),
            self.half_ranges.iter().map(|&r| lambda * r).collect(),
        )
    }

    pub fn shift(&self, v: T) -> Self {
        Self::from_parts(
            self.cum.clone(),
            self.centers.iter().map(|&c| c + v).collect(),
            self.half_ranges.clone(),
        )
    }

    /// `∫₀¹ f(t) dt`.
    pub fn integral(&self) -> T {
        self.weights()
            .iter()
            .zip(&self.centers)
            .map(|(&p, &c)| p * c)
            .sum()
    }

    /// `∫₀¹ f(t) g(t) dt`, exact.
    pub fn inner(&self, other: &Self) -> T {
        let grid = partition::union([self.cum_weights(), other.cum_weights()]);
        let a = self.on_partition(&grid);
        let b = other.on_partition(&grid);
        let w = partition::piece_weights(&grid);
        (0..grid.len())
            .map(|i| {
                w[i] * (a.centers[i] * b.centers[i]
                    + third::<T>() * a.half_ranges[i] * b.half_ranges[i])
            })
            .sum()
    }

    /// `∫₀¹ f(t)² dt`, exact.
    pub fn norm_sq(&self) -> T {
        self.weights()
            .iter()
            .zip(self.centers.iter().zip(&self.half_ranges))
            .map(|(&p, (&c, &r))| p * (c * c + third::<T>() * r * r))
            .sum()
    }

    /// Index of the first piece that violates monotonicity, if any.
    pub(crate) fn monotonicity_violation(&self, tol: T) -> Option<Error> {
        for (i, &r) in self.half_ranges.iter().enumerate() {
            if !r.is_finite() || !self.centers[i].is_finite() || r < -tol {
                return Some(Error::NegativeHalfRange { index: i });
            }
        }
        for i in 1..self.len() {
            if self.piece_end(i - 1) > self.piece_start(i) + tol {
                return Some(Error::NotMonotone { index: i });
            }
        }
        None
    }

    pub(crate) fn half_ranges_mut(&mut self) -> &mut [T] {
        &mut self.half_ranges
    }
}

impl<T> AsRef<PiecewiseLinear<T>> for PiecewiseLinear<T> {
    fn as_ref(&self) -> &PiecewiseLinear<T> {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn example_x() -> PiecewiseLinear<f64> {
        PiecewiseLinear::new(
            vec![0.1, 0.7, 1.0],
            vec![2.0, 4.0, 6.5],
            vec![1.0, 1.0, 1.5],
        )
        .unwrap()
    }

    #[test]
    fn eval_inside_and_at_breakpoints() {
        let f = example_x();
        assert_abs_diff_eq!(f.eval(0.05).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.eval(0.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.eval(0.1).unwrap(), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.eval(1.0).unwrap(), 8.0, epsilon = 1e-14);
        assert!(f.eval(1.5).is_err());
        assert!(f.eval(f64::NAN).is_err());
    }

    #[test]
    fn eval_left_is_the_left_limit() {
        let f = PiecewiseLinear::new(vec![0.5, 1.0], vec![0.0, 10.0], vec![1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(f.eval(0.5).unwrap(), 9.0);
        assert_abs_diff_eq!(f.eval_left(0.5).unwrap(), 1.0);
    }

    #[test]
    fn refine_keeps_values() {
        let f = example_x();
        let g = f.on_partition(&[0.1, 0.4, 0.7, 0.8, 1.0]);
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            assert_abs_diff_eq!(f.eval(t).unwrap(), g.eval(t).unwrap(), epsilon = 1e-12);
        }
        assert_eq!(g.centers()[0], 2.0);
    }

    #[test]
    fn scaling_example() {
        let f = example_x();
        let g = f.scale(2.0);
        assert_eq!((g.centers()[0], g.half_ranges()[0]), (4.0, 2.0));
        let h = f.scale(-1.0);
        assert_eq!((h.centers()[0], h.half_ranges()[0]), (-2.0, -1.0));
        assert!(h.monotonicity_violation(1e-9).is_some());
    }

    #[test]
    fn additive_inverse_is_zero() {
        let f = example_x();
        let z = f.add(&f.scale(-1.0));
        assert!(z.centers().iter().chain(z.half_ranges()).all(|&v| v == 0.0));
    }

    #[test]
    fn reflected_evaluates_at_one_minus_t() {
        let f = example_x();
        let g = f.reflected();
        for k in 1..100 {
            let t = k as f64 / 100.0 + 0.003;
            assert_abs_diff_eq!(
                g.eval(t).unwrap(),
                f.eval(1.0 - t).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn inner_matches_norm() {
        let f = example_x();
        assert_abs_diff_eq!(f.inner(&f), f.norm_sq(), epsilon = 1e-12);
    }
}
