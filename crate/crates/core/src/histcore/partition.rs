//! Cumulative-weight partitions of `[0, 1]`.
//!
//! A partition is stored as the strictly increasing list of right endpoints
//! `w_1 < w_2 < ... < w_n = 1`; the left endpoint `w_0 = 0` is implicit.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Absolute tolerance under which two cumulative weights are the same breakpoint.
pub const BREAKPOINT_TOL: f64 = 1e-12;

pub(crate) fn validate<T: Scalar>(cum: &[T]) -> Result<()> {
    let Some(&last) = cum.last() else {
        return Err(Error::InvalidPartition("no pieces".into()));
    };
    let tol = T::tol(BREAKPOINT_TOL);
    if (last - T::one()).abs() > tol {
        return Err(Error::InvalidPartition(format!(
            "last cumulative weight is {last}, expected 1"
        )));
    }
    let mut prev = T::zero();
    for (i, &w) in cum.iter().enumerate() {
        if !w.is_finite() || w <= prev {
            return Err(Error::InvalidPartition(format!(
                "cumulative weights not strictly increasing at {i}"
            )));
        }
        prev = w;
    }
    Ok(())
}

/// Piece weights `w_i - w_{i-1}`.
pub fn piece_weights<T: Scalar>(cum: &[T]) -> Vec<T> {
    let mut prev = T::zero();
    cum.iter()
        .map(|&w| {
            let p = w - prev;
            prev = w;
            p
        })
        .collect()
}

/// Sorted union of several partitions; breakpoints closer than
/// [`BREAKPOINT_TOL`] collapse onto the smaller one.
pub fn union<'a, T, I>(partitions: I) -> Vec<T>
where
    T: Scalar,
    I: IntoIterator<Item = &'a [T]>,
{
    let mut all: Vec<T> = partitions.into_iter().flatten().copied().collect();
    dedup_sorted(&mut all)
}

/// The partition closed under `t -> 1 - t`, i.e. the union of `cum` with its
/// reflection. Functions on such a partition can be reflected without
/// introducing new breakpoints.
pub fn reflection_closed<T: Scalar>(cum: &[T]) -> Vec<T> {
    let mut all: Vec<T> = cum.to_vec();
    all.extend(reflect(cum));
    dedup_sorted(&mut all)
}

/// Right endpoints of the reflected pieces, in increasing order.
pub(crate) fn reflect<T: Scalar>(cum: &[T]) -> Vec<T> {
    let n = cum.len();
    (0..n)
        .map(|i| {
            if i + 1 == n {
                T::one()
            } else {
                T::one() - cum[n - 2 - i]
            }
        })
        .collect()
}

fn dedup_sorted<T: Scalar>(all: &mut [T]) -> Vec<T> {
    all.sort_by(|a, b| a.partial_cmp(b).expect("finite cumulative weights"));
    let tol = T::tol(BREAKPOINT_TOL);
    let mut out: Vec<T> = Vec::with_capacity(all.len());
    for &w in all.iter() {
        if w <= tol {
            continue;
        }
        match out.last() {
            Some(&last) if w - last <= tol => {}
            _ => out.push(w),
        }
    }
    match out.last_mut() {
        Some(last) if (*last - T::one()).abs() <= tol => *last = T::one(),
        _ => out.push(T::one()),
    }
    out
}

/// True when every breakpoint of `coarse` appears in `fine` (within tolerance).
pub fn is_refinement<T: Scalar>(fine: &[T], coarse: &[T]) -> bool {
    let tol = T::tol(BREAKPOINT_TOL);
    coarse
        .iter()
        .all(|&w| fine.iter().any(|&f| (f - w).abs() <= tol))
}
