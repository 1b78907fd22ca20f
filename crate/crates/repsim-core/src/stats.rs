//! Deterministic reductions and the two-sample Kolmogorov-Smirnov distance.
//!
//! Sums are formed by pairwise tree reduction in a fixed order, so results
//! are bit-identical regardless of how the inputs were produced (serially or
//! by any number of workers).

use crate::scalar::Real;

/// Pairwise tree sum over the slice in index order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_generic(values)
}

pub fn pairwise_sum_generic<F: Real>(values: &[F]) -> F {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = F::zero();
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum_generic(&values[..mid]) + pairwise_sum_generic(&values[mid..])
}

/// Sample mean and standard error (`stddev / sqrt(n)`, with the n-1
/// normalization). The standard error of fewer than two samples is zero.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(samples) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let squared: Vec<f64> = samples.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let variance = pairwise_sum(&squared) / (n - 1) as f64;
    (mean, (variance / n as f64).sqrt())
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.total_cmp(q));
    ys.sort_by(|p, q| p.total_cmp(q));
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

/// Rejection threshold for the KS statistic at significance `alpha`:
/// `c(alpha) * sqrt((n + m) / (n m))` with `c = sqrt(-ln(alpha/2) / 2)`.
pub fn ks_threshold(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}
