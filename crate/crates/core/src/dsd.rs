//! The distribution and symmetric-distribution regression model.
//!
//! A response quantile function is predicted as
//! `γ + Σ_k α_k Ψ_{X_k}(t) - β_k Ψ_{X_k}(1 - t)` with `α_k, β_k ≥ 0`.
//! Coefficients are stored in the layout `[α_1, β_1, ..., α_p, β_p, γ]`.

use crate::error::{Error, Result};
use crate::histcore::{partition, PiecewiseLinear, QuantileFunction};
use crate::metrics::{mallows_sq_to_scalar, symbolic_mean, VariableColumn};
use crate::nnqp::{self, QpProblem, SolveOptions};
use crate::scalar::{third, two, Scalar};

/// `m` units of one response and `p` predictors, all on a single partition
/// that is closed under `t -> 1 - t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicTable<T> {
    labels: Vec<String>,
    response: VariableColumn<T>,
    predictors: Vec<VariableColumn<T>>,
}

impl<T: Scalar> SymbolicTable<T> {
    pub fn new(
        labels: Vec<String>,
        response: Vec<QuantileFunction<T>>,
        predictors: Vec<Vec<QuantileFunction<T>>>,
    ) -> Result<Self> {
        let m = response.len();
        if m == 0 || predictors.is_empty() {
            return Err(Error::EmptyTable);
        }
        if labels.len() != m {
            return Err(Error::LengthMismatch {
                what: "unit labels",
                expected: m,
                found: labels.len(),
            });
        }
        for col in &predictors {
            if col.len() != m {
                return Err(Error::LengthMismatch {
                    what: "predictor units",
                    expected: m,
                    found: col.len(),
                });
            }
        }
        let all = response.iter().chain(predictors.iter().flatten());
        let grid = partition::reflection_closed(&partition::union(all.map(|q| q.cum_weights())));
        let response = VariableColumn::on_partition(&response, &grid)?;
        let predictors = predictors
            .iter()
            .map(|col| VariableColumn::on_partition(col, &grid))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            labels,
            response,
            predictors,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn response(&self) -> &VariableColumn<T> {
        &self.response
    }

    pub fn predictors(&self) -> &[VariableColumn<T>] {
        &self.predictors
    }

    pub fn cum_weights(&self) -> &[T] {
        self.response.cum_weights()
    }

    pub fn weights(&self) -> Vec<T> {
        self.response.weights()
    }

    /// Number of units.
    pub fn m(&self) -> usize {
        self.response.len()
    }

    /// Number of predictors.
    pub fn p(&self) -> usize {
        self.predictors.len()
    }

    /// Number of pieces of the shared partition.
    pub fn n(&self) -> usize {
        self.cum_weights().len()
    }

    /// Center and half-range regressors for unit `j`, piece `i`.
    fn regressors(&self, j: usize, i: usize) -> (Vec<T>, Vec<T>) {
        let n = self.n();
        let d = 2 * self.p() + 1;
        let mut phc = vec![T::zero(); d];
        let mut phr = vec![T::zero(); d];
        for (k, col) in self.predictors.iter().enumerate() {
            let x = &col.units()[j];
            phc[2 * k] = x.centers()[i];
            phc[2 * k + 1] = -x.centers()[n - 1 - i];
            phr[2 * k] = x.half_ranges()[i];
            phr[2 * k + 1] = x.half_ranges()[n - 1 - i];
        }
        phc[d - 1] = T::one();
        (phc, phr)
    }

    /// Predicted centers and half-ranges of unit `j` under coefficients `b`.
    fn predicted_pieces(&self, j: usize, b: &[T]) -> (Vec<T>, Vec<T>) {
        (0..self.n())
            .map(|i| {
                let (phc, phr) = self.regressors(j, i);
                (dot(&phc, b), dot(&phr, b))
            })
            .unzip()
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn check_dim<T: Scalar>(t: &SymbolicTable<T>, b: &[T]) -> Result<()> {
    let d = 2 * t.p() + 1;
    if b.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.len(),
        });
    }
    Ok(())
}

/// Assembles `H`, `F` and `C` so that `½ bᵀHb + Fᵀb + C` is the summed
/// squared Mallows distance between observed and predicted responses.
/// Fails with [`Error::NonFinite`] when the sums overflow.
pub fn build_qp<T: Scalar>(t: &SymbolicTable<T>) -> Result<QpProblem<T>> {
    let d = 2 * t.p() + 1;
    let w = t.weights();
    let mut h = vec![T::zero(); d * d];
    let mut f = vec![T::zero(); d];
    let mut c = T::zero();
    let (two, third) = (two::<T>(), third::<T>());
    for j in 0..t.m() {
        let y = &t.response.units()[j];
        for (i, &p) in w.iter().enumerate() {
            let (phc, phr) = t.regressors(j, i);
            let (cy, ry) = (y.centers()[i], y.half_ranges()[i]);
            for a in 0..d {
                for b in 0..d {
                    h[a * d + b] =
                        h[a * d + b] + two * p * (phc[a] * phc[b] + third * phr[a] * phr[b]);
                }
                f[a] = f[a] - two * p * (cy * phc[a] + third * ry * phr[a]);
            }
            c = c + p * (cy * cy + third * ry * ry);
        }
    }
    let constrained: Vec<usize> = (0..2 * t.p()).collect();
    QpProblem::new(h, f, c, &constrained)
}

/// Summed squared Mallows distance between observed and predicted responses.
pub fn se<T: Scalar>(t: &SymbolicTable<T>, b: &[T]) -> Result<T> {
    check_dim(t, b)?;
    let w = t.weights();
    let mut total = T::zero();
    for j in 0..t.m() {
        let y = &t.response.units()[j];
        let (ch, rh) = t.predicted_pieces(j, b);
        for (i, &p) in w.iter().enumerate() {
            let dc = y.centers()[i] - ch[i];
            let dr = y.half_ranges()[i] - rh[i];
            total = total + p * (dc * dc + third::<T>() * dr * dr);
        }
    }
    Ok(total)
}

/// Gradient of [`se`] with respect to `[α_1, β_1, ..., γ]`, from the
/// per-piece residuals.
pub fn gradient_se<T: Scalar>(t: &SymbolicTable<T>, b: &[T]) -> Result<Vec<T>> {
    check_dim(t, b)?;
    let n = t.n();
    let d = b.len();
    let w = t.weights();
    let two = two::<T>();
    let two_thirds = two * third::<T>();
    let mut g = vec![T::zero(); d];
    for j in 0..t.m() {
        let y = &t.response.units()[j];
        let (ch, rh) = t.predicted_pieces(j, b);
        for (i, &p) in w.iter().enumerate() {
            let ec = y.centers()[i] - ch[i];
            let er = y.half_ranges()[i] - rh[i];
            for (k, col) in t.predictors.iter().enumerate() {
                let x = &col.units()[j];
                let (ci, ri) = (x.centers()[i], x.half_ranges()[i]);
                let (cs, rs) = (x.centers()[n - 1 - i], x.half_ranges()[n - 1 - i]);
                g[2 * k] = g[2 * k] + p * (-two * ec * ci - two_thirds * er * ri);
                g[2 * k + 1] = g[2 * k + 1] + p * (two * ec * cs - two_thirds * er * rs);
            }
            g[d - 1] = g[d - 1] - p * two * ec;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DsdCoefficients<T> {
    pub alphas: Vec<T>,
    pub betas: Vec<T>,
    pub gamma: T,
}

impl<T: Scalar> DsdCoefficients<T> {
    pub fn new(alphas: Vec<T>, betas: Vec<T>, gamma: T) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(Error::LengthMismatch {
                what: "betas",
                expected: alphas.len(),
                found: betas.len(),
            });
        }
        if alphas.iter().chain(&betas).any(|&v| !(v >= T::zero())) {
            return Err(Error::NegativeSlopeUnsupported);
        }
        Ok(Self {
            alphas,
            betas,
            gamma,
        })
    }

    /// From the solver layout `[α_1, β_1, ..., α_p, β_p, γ]`; tiny negative
    /// round-off is clamped to zero.
    pub fn from_vector(b: &[T]) -> Self {
        let p = (b.len() - 1) / 2;
        let clamp = |v: T| v.max(T::zero());
        Self {
            alphas: (0..p).map(|k| clamp(b[2 * k])).collect(),
            betas: (0..p).map(|k| clamp(b[2 * k + 1])).collect(),
            gamma: b[2 * p],
        }
    }

    pub fn to_vector(&self) -> Vec<T> {
        let mut b = Vec::with_capacity(2 * self.p() + 1);
        for (&a, &bt) in self.alphas.iter().zip(&self.betas) {
            b.push(a);
            b.push(bt);
        }
        b.push(self.gamma);
        b
    }

    pub fn p(&self) -> usize {
        self.alphas.len()
    }

    /// Predicted quantile function for one unit, on `partition` refined by
    /// the predictors' own breakpoints.
    pub fn predict_on(
        &self,
        partition_hint: &[T],
        xs: &[QuantileFunction<T>],
    ) -> Result<QuantileFunction<T>> {
        if xs.len() != self.p() {
            return Err(Error::ArityMismatch {
                expected: self.p(),
                found: xs.len(),
            });
        }
        let mut parts: Vec<&[T]> = xs.iter().map(|q| q.cum_weights()).collect();
        parts.push(partition_hint);
        let grid = partition::reflection_closed(&partition::union(parts));
        let n = grid.len();
        let mut c = vec![self.gamma; n];
        let mut r = vec![T::zero(); n];
        for (k, x) in xs.iter().enumerate() {
            let x = x.on_partition(&grid);
            let (a, b) = (self.alphas[k], self.betas[k]);
            for i in 0..n {
                c[i] = c[i] + a * x.centers()[i] - b * x.centers()[n - 1 - i];
                r[i] = r[i] + a * x.half_ranges()[i] + b * x.half_ranges()[n - 1 - i];
            }
        }
        QuantileFunction::new(grid, c, r)
    }

    pub fn predict(&self, xs: &[QuantileFunction<T>]) -> Result<QuantileFunction<T>> {
        self.predict_on(&[T::one()], xs)
    }

    /// Predictions for every unit of a table, on the table's partition.
    pub fn predict_table(&self, t: &SymbolicTable<T>) -> Result<VariableColumn<T>> {
        if t.p() != self.p() {
            return Err(Error::ArityMismatch {
                expected: self.p(),
                found: t.p(),
            });
        }
        let b = self.to_vector();
        let units = (0..t.m())
            .map(|j| {
                let (c, r) = t.predicted_pieces(j, &b);
                QuantileFunction::new(t.cum_weights().to_vec(), c, r)
            })
            .collect::<Result<Vec<_>>>()?;
        VariableColumn::on_partition(&units, t.cum_weights())
    }
}

/// A fitted model.
#[derive(Debug, Clone, PartialEq)]
pub struct DsdModel<T> {
    pub coefficients: DsdCoefficients<T>,
    pub omega: T,
    pub se: T,
    pub kkt_residual: T,
    pub iterations: usize,
    pub regularized: bool,
    /// The partition the model was fitted on.
    pub partition: Vec<T>,
}

impl<T: Scalar> DsdModel<T> {
    pub fn alphas(&self) -> &[T] {
        &self.coefficients.alphas
    }

    pub fn betas(&self) -> &[T] {
        &self.coefficients.betas
    }

    pub fn gamma(&self) -> T {
        self.coefficients.gamma
    }

    pub fn predict(&self, xs: &[QuantileFunction<T>]) -> Result<QuantileFunction<T>> {
        self.coefficients.predict_on(&self.partition, xs)
    }

    pub fn predict_table(&self, t: &SymbolicTable<T>) -> Result<VariableColumn<T>> {
        self.coefficients.predict_table(t)
    }
}

pub fn fit<T: Scalar>(t: &SymbolicTable<T>) -> Result<DsdModel<T>> {
    fit_with(t, SolveOptions::default())
}

pub fn fit_with<T: Scalar>(t: &SymbolicTable<T>, opts: SolveOptions) -> Result<DsdModel<T>> {
    let qp = build_qp(t)?;
    let sol = nnqp::solve(&qp, opts)?;
    let coefficients = DsdCoefficients::from_vector(&sol.b);
    let predicted = coefficients.predict_table(t)?;
    let se = se(t, &coefficients.to_vector())?.max(T::zero());
    let omega = match omega(t, &predicted) {
        Ok(v) => v,
        Err(Error::DegenerateResponse) if se <= T::tol(1e-12) => T::one(),
        Err(e) => return Err(e),
    };
    Ok(DsdModel {
        coefficients,
        omega,
        se,
        kkt_residual: sol.kkt_residual,
        iterations: sol.iterations,
        regularized: sol.regularized,
        partition: t.cum_weights().to_vec(),
    })
}

/// Explained over total squared Mallows dispersion around the response mean.
pub fn omega<T: Scalar>(t: &SymbolicTable<T>, predicted: &VariableColumn<T>) -> Result<T> {
    if predicted.len() != t.m() {
        return Err(Error::LengthMismatch {
            what: "predicted units",
            expected: t.m(),
            found: predicted.len(),
        });
    }
    let ybar = symbolic_mean(t.response());
    let num: T = predicted
        .units()
        .iter()
        .map(|q| mallows_sq_to_scalar(q, ybar))
        .sum();
    let den: T = t
        .response()
        .units()
        .iter()
        .map(|q| mallows_sq_to_scalar(q, ybar))
        .sum();
    let floor = {
        let e = T::epsilon() * (T::one() + ybar.abs());
        e * e * T::lit(t.m() as f64)
    };
    if !(den > floor) {
        return Err(Error::DegenerateResponse);
    }
    Ok(num / den)
}

/// `ε(t) = observed(t) - predicted(t)`.
pub fn error_function<T: Scalar>(
    observed: &QuantileFunction<T>,
    predicted: &QuantileFunction<T>,
) -> PiecewiseLinear<T> {
    observed.as_piecewise().sub(predicted.as_piecewise())
}

/// Prediction of a center-and-deviation baseline with given coefficients:
/// `intercept + slope_mean x̄ + slope_centered (x(t) - x̄)` where `x̄` is the
/// mean of `x`.
pub fn baseline_predict_vi<T: Scalar>(
    intercept: T,
    slope_mean: T,
    slope_centered: T,
    x: &QuantileFunction<T>,
) -> Result<QuantileFunction<T>> {
    if slope_centered < T::zero() {
        return Err(Error::NegativeSlopeUnsupported);
    }
    let xbar = x.mean();
    let base = intercept + slope_mean * xbar;
    let c = x
        .centers()
        .iter()
        .map(|&c| base + slope_centered * (c - xbar))
        .collect();
    let r = x
        .half_ranges()
        .iter()
        .map(|&r| slope_centered * r)
        .collect();
    QuantileFunction::new(x.cum_weights().to_vec(), c, r)
}

/// Prediction of a bound-wise affine baseline: every bin `[lo, hi]` maps to
/// `[intercept + slope lo, intercept + slope hi]`.
pub fn baseline_predict_bd<T: Scalar>(
    intercept: T,
    slope: T,
    x: &QuantileFunction<T>,
) -> Result<QuantileFunction<T>> {
    if slope < T::zero() {
        return Err(Error::NegativeSlopeUnsupported);
    }
    let c = x.centers().iter().map(|&c| intercept + slope * c).collect();
    let r = x.half_ranges().iter().map(|&r| slope * r).collect();
    QuantileFunction::new(x.cum_weights().to_vec(), c, r)
}
