//! Shared inputs for the benchmarks.

use fmetric::space::{gen_exp, gen_hybrid, gen_square_grid};
use fmetric::{DistanceMatrix, FiniteSpace};

pub const SIZES: [usize; 3] = [16, 32, 64];

/// The three generated families at size `n`.
pub fn families(n: usize) -> Vec<(&'static str, FiniteSpace)> {
    vec![
        ("hybrid", gen_hybrid(n.max(4)).expect("n >= 4")),
        ("exp", gen_exp(n).expect("n >= 1")),
        ("square_grid", gen_square_grid(n.max(2)).expect("n >= 2")),
    ]
}

/// A dense non-metric space with no structure for the search to exploit:
/// weights cycle through a fixed irrational stride in `(0, 10]`.
pub fn scrambled(n: usize) -> FiniteSpace {
    let stride = (5f64.sqrt() - 1.0) / 2.0;
    FiniteSpace::from_matrix(DistanceMatrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            let (a, b) = (i.min(j), i.max(j));
            10.0 - 10.0 * ((a * n + b) as f64 * stride).fract() + 1e-3
        }
    }))
}
