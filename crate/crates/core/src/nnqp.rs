//! Quadratic programs `min ½ bᵀHb + Fᵀb + C` with `b_i ≥ 0` on a chosen
//! subset of coordinates, solved by a primal active-set method.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default KKT tolerance, relative to `1 + ‖F‖∞`.
pub const DEFAULT_TOL: f64 = 1e-9;

const SYMMETRY_TOL: f64 = 1e-10;
const RIDGE: f64 = 1e-10;
const MAX_ASCENTS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct QpProblem<T> {
    d: usize,
    h: Vec<T>,
    f: Vec<T>,
    c: T,
    constrained: Vec<bool>,
}

impl<T: Scalar> QpProblem<T> {
    /// `h` is row-major of order `f.len()`.
    pub fn new(h: Vec<T>, f: Vec<T>, c: T, constrained: &[usize]) -> Result<Self> {
        let d = f.len();
        if d == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if h.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: h.len(),
            });
        }
        if !(c.is_finite() && h.iter().chain(&f).all(|v| v.is_finite())) {
            return Err(Error::NonFinite);
        }
        let scale = h.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
        let tol = T::tol(SYMMETRY_TOL) * scale;
        for i in 0..d {
            for j in 0..i {
                if !((h[i * d + j] - h[j * d + i]).abs() <= tol) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let mut mask = vec![false; d];
        for &k in constrained {
            if k >= d {
                return Err(Error::InvalidConstraint { index: k });
            }
            mask[k] = true;
        }
        Ok(Self {
            d,
            h,
            f,
            c,
            constrained: mask,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn h(&self, i: usize, j: usize) -> T {
        self.h[i * self.d + j]
    }

    pub fn hessian(&self) -> &[T] {
        &self.h
    }

    pub fn linear(&self) -> &[T] {
        &self.f
    }

    pub fn constant(&self) -> T {
        self.c
    }

    pub fn is_constrained(&self, i: usize) -> bool {
        self.constrained[i]
    }

    pub fn constrained_indices(&self) -> Vec<usize> {
        (0..self.d).filter(|&i| self.constrained[i]).collect()
    }

    pub fn objective(&self, b: &[T]) -> T {
        let half = T::lit(0.5);
        let mut quad = T::zero();
        for i in 0..self.d {
            let mut row = T::zero();
            for j in 0..self.d {
                row = row + self.h(i, j) * b[j];
            }
            quad = quad + b[i] * row;
        }
        let lin: T = self.f.iter().zip(b).map(|(&f, &x)| f * x).sum();
        half * quad + lin + self.c
    }

    /// `Hb + F`.
    pub fn gradient(&self, b: &[T]) -> Vec<T> {
        (0..self.d)
            .map(|i| {
                let mut g = self.f[i];
                for j in 0..self.d {
                    g = g + self.h(i, j) * b[j];
                }
                g
            })
            .collect()
    }

    fn scale(&self) -> T {
        T::one() + self.f.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    /// Defaults to `100 d` when `None`.
    pub max_iter: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution<T> {
    pub b: Vec<T>,
    pub objective: T,
    pub kkt_residual: T,
    pub iterations: usize,
    /// Whether a ridge term was needed to solve a singular passive block.
    pub regularized: bool,
    /// Objective after each accepted iterate.
    pub trace: Vec<T>,
}

/// Checks the KKT conditions at `b`. Returns whether all hold within `tol`
/// and the largest normalised violation.
pub fn kkt_check<T: Scalar>(p: &QpProblem<T>, b: &[T], tol: T) -> Result<(bool, T)> {
    if b.len() != p.d {
        return Err(Error::DimensionMismatch {
            expected: p.d,
            found: b.len(),
        });
    }
    let r = kkt_residual(p, b);
    Ok((r <= tol, r))
}

fn kkt_residual<T: Scalar>(p: &QpProblem<T>, b: &[T]) -> T {
    let g = p.gradient(b);
    let s = p.scale();
    let mut worst = T::zero();
    for i in 0..p.d {
        let v = if p.constrained[i] {
            let dual = (-g[i]).max(T::zero()) / s;
            let comp = (g[i] * b[i]).abs() / (s * (T::one() + b[i].abs()));
            let primal = (-b[i]).max(T::zero());
            dual.max(comp).max(primal)
        } else {
            g[i].abs() / s
        };
        worst = worst.max(v);
    }
    worst
}

pub fn solve<T: Scalar>(p: &QpProblem<T>, opts: SolveOptions) -> Result<QpSolution<T>> {
    let d = p.d;
    let max_iter = opts.max_iter.unwrap_or(100 * d);
    let tol = T::lit(opts.tol);
    let enter_tol = tol * p.scale();
    let mut passive: Vec<bool> = p.constrained.iter().map(|&c| !c).collect();
    let mut b = vec![T::zero(); d];
    let mut regularized = false;
    let mut trace = Vec::new();
    let mut iterations = 0usize;
    let mut ascents = 0usize;
    let mut blocked = vec![false; d];

    // Optimum over the free coordinates alone.
    if passive.iter().any(|&x| x) {
        let z = passive_solve(p, &passive, &mut regularized)?;
        b = z;
    }
    trace.push(p.objective(&b));

    loop {
        let g = p.gradient(&b);
        let mut enter: Option<usize> = None;
        for i in 0..d {
            if p.constrained[i] && !passive[i] && !blocked[i] && g[i] < -enter_tol {
                match enter {
                    Some(k) if g[k] <= g[i] => {}
                    _ => enter = Some(i),
                }
            }
        }
        let Some(t) = enter else { break };
        if iterations >= max_iter {
            return Err(Error::MaxIterationsExceeded { iterations });
        }
        iterations += 1;
        passive[t] = true;

        // Inner loop: move towards the passive-set optimum, dropping any
        // constrained coordinate that would turn negative.
        loop {
            let z = passive_solve(p, &passive, &mut regularized)?;
            let feasible = (0..d).all(|i| !p.constrained[i] || !passive[i] || z[i] > T::zero());
            if feasible {
                b = z;
                break;
            }
            if iterations >= max_iter {
                return Err(Error::MaxIterationsExceeded { iterations });
            }
            iterations += 1;
            let mut step = T::one();
            for i in 0..d {
                if p.constrained[i] && passive[i] && z[i] <= T::zero() {
                    let denom = b[i] - z[i];
                    let s = if denom > T::zero() {
                        b[i] / denom
                    } else {
                        T::zero()
                    };
                    step = step.min(s);
                }
            }
            for i in 0..d {
                b[i] = b[i] + step * (z[i] - b[i]);
            }
            for i in 0..d {
                if p.constrained[i] && passive[i] && b[i] <= T::zero() {
                    b[i] = T::zero();
                    passive[i] = false;
                }
            }
        }

        let obj = p.objective(&b);
        let prev = *trace.last().expect("trace starts non-empty");
        let slack = tol * (T::one() + prev.abs());
        if obj > prev + slack {
            ascents += 1;
            if ascents > MAX_ASCENTS {
                return Err(Error::NotPsd);
            }
        }
        if obj < prev - slack {
            blocked.iter_mut().for_each(|x| *x = false);
        } else if !passive[t] {
            // The entering coordinate was dropped straight away without
            // progress; skip it until something else improves the objective.
            blocked[t] = true;
        }
        trace.push(obj);
    }

    let kkt = kkt_residual(p, &b);
    if !(kkt <= tol) && blocked.iter().any(|&x| x) {
        return Err(Error::NotPsd);
    }
    Ok(QpSolution {
        objective: p.objective(&b),
        b,
        kkt_residual: kkt,
        iterations,
        regularized,
        trace,
    })
}

/// Minimiser over the passive coordinates with the others held at zero.
fn passive_solve<T: Scalar>(
    p: &QpProblem<T>,
    passive: &[bool],
    regularized: &mut bool,
) -> Result<Vec<T>> {
    let idx: Vec<usize> = (0..p.d).filter(|&i| passive[i]).collect();
    let k = idx.len();
    let mut z = vec![T::zero(); p.d];
    if k == 0 {
        return Ok(z);
    }
    let mut a = vec![T::zero(); k * k];
    let mut rhs = vec![T::zero(); k];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            a[r * k + c] = p.h(i, j);
        }
        rhs[r] = -p.f[i];
    }
    let sol = match cholesky_solve(&a, &rhs, k) {
        Some(x) => x,
        None => {
            let trace: T = (0..p.d).map(|i| p.h(i, i)).sum();
            let mut lambda = T::lit(RIDGE) * trace / T::lit(p.d as f64);
            if !(lambda > T::zero()) {
                lambda = T::tol(RIDGE);
            }
            for r in 0..k {
                a[r * k + r] = a[r * k + r] + lambda;
            }
            *regularized = true;
            cholesky_solve(&a, &rhs, k).ok_or(Error::NotPsd)?
        }
    };
    for (r, &i) in idx.iter().enumerate() {
        z[i] = sol[r];
    }
    Ok(z)
}

/// Solves `A x = rhs` for symmetric positive definite `A`; `None` when a
/// pivot is too small relative to the diagonal.
fn cholesky_solve<T: Scalar>(a: &[T], rhs: &[T], k: usize) -> Option<Vec<T>> {
    let max_diag = (0..k).fold(T::zero(), |acc, i| acc.max(a[i * k + i].abs()));
    if !(max_diag > T::zero()) {
        return None;
    }
    let floor = max_diag * T::epsilon() * T::lit(1e4);
    let mut l = vec![T::zero(); k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i * k + j];
            for m in 0..j {
                s = s - l[i * k + m] * l[j * k + m];
            }
            if i == j {
                if !(s > floor) {
                    return None;
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    let mut y = vec![T::zero(); k];
    for i in 0..k {
        let mut s = rhs[i];
        for m in 0..i {
            s = s - l[i * k + m] * y[m];
        }
        y[i] = s / l[i * k + i];
    }
    let mut x = vec![T::zero(); k];
    for i in (0..k).rev() {
        let mut s = y[i];
        for m in i + 1..k {
            s = s - l[m * k + i] * x[m];
        }
        x[i] = s / l[i * k + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn clamps_to_the_boundary() {
        let p = QpProblem::new(vec![2.0, 0.0, 0.0, 2.0], vec![-2.0, 2.0], 0.0, &[0, 1]).unwrap();
        let s = solve(&p, SolveOptions::default()).unwrap();
        assert_abs_diff_eq!(s.b[0], 1.0, epsilon = 1e-12);
        assert_eq!(s.b[1], 0.0);
        assert_abs_diff_eq!(s.objective, -1.0, epsilon = 1e-12);
        assert!(!s.regularized);
    }

    #[test]
    fn unconstrained_vertex() {
        let p = QpProblem::new(vec![2.0], vec![-4.0], 0.0, &[]).unwrap();
        let s = solve(&p, SolveOptions::default()).unwrap();
        assert_abs_diff_eq!(s.b[0], 2.0, epsilon = 1e-12);
        assert_eq!(s.iterations, 0);
    }

    #[test]
    fn kkt_detects_negative_gradient_at_zero() {
        let p = QpProblem::new(vec![2.0, 0.0, 0.0, 2.0], vec![-2.0, 2.0], 0.0, &[0, 1]).unwrap();
        let (ok, r) = kkt_check(&p, &[0.0, 0.0], 1e-9).unwrap();
        assert!(!ok && r > 0.0);
        assert!(kkt_check(&p, &[0.0], 1e-9).is_err());
    }

    #[test]
    fn duplicated_column_uses_ridge() {
        // Two identical nonnegative variables plus a free one.
        let h = vec![2.0, 2.0, 0.0, 2.0, 2.0, 0.0, 0.0, 0.0, 2.0];
        let p = QpProblem::new(h, vec![-2.0, -2.0, 0.0], 0.0, &[0, 1]).unwrap();
        let s = solve(&p, SolveOptions::default()).unwrap();
        assert_abs_diff_eq!(s.b[0] + s.b[1], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn rejects_bad_problems() {
        assert!(matches!(
            QpProblem::new(vec![1.0, 2.0, 0.0, 1.0], vec![0.0, 0.0], 0.0, &[]),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(matches!(
            QpProblem::new(vec![1.0], vec![0.0], 0.0, &[1]),
            Err(Error::InvalidConstraint { index: 1 })
        ));
        assert!(QpProblem::<f64>::new(vec![], vec![], 0.0, &[]).is_err());
        assert!(matches!(
            QpProblem::new(vec![f64::INFINITY], vec![0.0], 0.0, &[]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn unbounded_problem_is_not_psd() {
        let p = QpProblem::new(vec![-1.0], vec![-1.0], 0.0, &[0]).unwrap();
        assert_eq!(
            solve(&p, SolveOptions::default()).unwrap_err(),
            Error::NotPsd
        );
    }

    #[test]
    fn objective_trace_is_non_increasing() {
        let h = vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let p = QpProblem::new(h, vec![-1.0, 2.0, -3.0], 0.0, &[0, 1, 2]).unwrap();
        let s = solve(&p, SolveOptions::default()).unwrap();
        assert!(s.trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(s.kkt_residual <= 1e-9);
    }
}
