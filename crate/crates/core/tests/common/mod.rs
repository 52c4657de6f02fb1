#![allow(dead_code)]

use histreg::{Histogram, Quantile, Table};
use proptest::prelude::*;

/// A random histogram with `1..=max_bins` bins, possibly with gaps and
/// degenerate bins, converted to its quantile function.
pub fn arb_quantile(max_bins: usize) -> impl Strategy<Value = Quantile> {
    (1..=max_bins)
        .prop_flat_map(|n| {
            (
                -10.0..10.0f64,
                prop::collection::vec((0.05..1.0f64, 0.0..3.0f64, prop::bool::ANY, 0.0..1.0f64), n),
            )
        })
        .prop_map(|(start, parts)| {
            let total: f64 = parts.iter().map(|p| p.0).sum();
            let mut weights: Vec<f64> = parts.iter().map(|p| p.0 / total).collect();
            let head: f64 = weights[..weights.len() - 1].iter().sum();
            *weights.last_mut().unwrap() = 1.0 - head;
            let mut lo = start;
            let mut bins = Vec::new();
            for &(_, width, gap, g) in &parts {
                if gap {
                    lo += g;
                }
                bins.push((lo, lo + width));
                lo += width;
            }
            Histogram::new(bins, weights).unwrap().to_quantile().unwrap()
        })
}

/// Quantile functions sampled on a grid of `k` points in `[0, 1]`, with
/// pieces treated as half open.
pub fn grid(k: usize) -> Vec<f64> {
    (0..k).map(|i| (i as f64 + 0.5) / k as f64).collect()
}

/// A random table: `p` predictors, `m` units, and a response that is an
/// exact model output plus an independent quantile-valued disturbance.
pub fn arb_table(p: std::ops::RangeInclusive<usize>, m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Table> {
    (p, m)
        .prop_flat_map(|(p, m)| {
            (
                prop::collection::vec(prop::collection::vec(arb_quantile(4), m), p),
                prop::collection::vec(arb_quantile(3), m),
                prop::collection::vec((0.0..3.0f64, 0.0..3.0f64), p),
                -5.0..5.0f64,
                0.0..1.0f64,
            )
        })
        .prop_map(|(xs, noise, ab, gamma, scale)| {
            let m = noise.len();
            let coef = histreg::Coefficients::new(
                ab.iter().map(|v| v.0).collect(),
                ab.iter().map(|v| v.1).collect(),
                gamma,
            )
            .unwrap();
            let y: Vec<Quantile> = (0..m)
                .map(|j| {
                    let unit: Vec<Quantile> = xs.iter().map(|col| col[j].clone()).collect();
                    let exact = coef.predict(&unit).unwrap();
                    exact.add(&noise[j].scale_nonneg(scale).unwrap())
                })
                .collect();
            let labels = (0..m).map(|j| j.to_string()).collect();
            Table::new(labels, y, xs).unwrap()
        })
}

/// Dense solve by Gaussian elimination with partial pivoting.
pub fn gauss_solve(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}
