//! Test-only oracles and fixtures, independent of the library's algorithms.

#![allow(dead_code)]

use fmetric::{DistanceMatrix, FiniteSpace};
use rand::Rng;

/// Minimum over all simple chains `x = u1, ..., uN = y` of the left-to-right
/// chain sum, by exhaustive enumeration of ordered interior subsets.
pub fn brute_force_chain(d: &DistanceMatrix, x: usize, y: usize) -> f64 {
    if x == y {
        return 0.0;
    }
    let n = d.len();
    let mut best = f64::INFINITY;
    let mut used = vec![false; n];
    used[x] = true;
    used[y] = true;
    extend(d, x, y, 0.0, &mut used, &mut best);
    best
}

fn extend(d: &DistanceMatrix, at: usize, y: usize, sum: f64, used: &mut [bool], best: &mut f64) {
    let direct = sum + d.get(at, y);
    if direct < *best {
        *best = direct;
    }
    for next in 0..d.len() {
        if !used[next] {
            used[next] = true;
            extend(d, next, y, sum + d.get(at, next), used, best);
            used[next] = false;
        }
    }
}

pub fn brute_force_all(d: &DistanceMatrix) -> DistanceMatrix {
    DistanceMatrix::from_fn(d.len(), |i, j| brute_force_chain(d, i, j))
}

/// Symmetric zero-diagonal space with off-diagonal weights from `weight`.
pub fn random_space(n: usize, mut weight: impl FnMut() -> f64) -> FiniteSpace {
    let mut m = DistanceMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let w = weight();
            m.set(i, j, w);
            m.set(j, i, w);
        }
    }
    FiniteSpace::from_matrix(m)
}

/// Uniform on `(0, 10]`.
pub fn uniform_weight<R: Rng>(rng: &mut R) -> f64 {
    10.0 - rng.gen_range(0.0..10.0)
}

/// Uniform on the dyadic grid `{k / 1024 : k = 1..=10240}`, so that chain
/// sums of a few weights are exact in `f64`.
pub fn dyadic_weight<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(1..=10_240u32) as f64 / 1024.0
}

/// Points on a line with the usual metric.
pub fn line(points: &[f64]) -> FiniteSpace {
    FiniteSpace::from_matrix(DistanceMatrix::from_fn(points.len(), |i, j| {
        (points[i] - points[j]).abs()
    }))
}
