use serde::{Deserialize, Serialize};

use super::{DistanceMatrix, FiniteSpace};
use crate::error::{Error, Result};

/// A 3-index table `sigma(a, b, c)` over labelled points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct TwoMetricTable {
    labels: Vec<String>,
    sigma: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    labels: Vec<String>,
    sigma: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<RawTable> for TwoMetricTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        TwoMetricTable::new(raw.labels, raw.sigma)
    }
}

impl From<TwoMetricTable> for RawTable {
    fn from(t: TwoMetricTable) -> Self {
        let n = t.labels.len();
        let sigma = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).map(|c| t.get(a, b, c)).collect())
                    .collect()
            })
            .collect();
        RawTable {
            labels: t.labels,
            sigma,
        }
    }
}

impl TwoMetricTable {
    /// Checks shape and sign only; see [`TwoMetricTable::validate`].
    pub fn new(labels: Vec<String>, sigma: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let n = labels.len();
        let shape_err = || Error::TwoMetric(format!("sigma must be {n}x{n}x{n}"));
        if sigma.len() != n {
            return Err(shape_err());
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for (a, plane) in sigma.into_iter().enumerate() {
            if plane.len() != n {
                return Err(shape_err());
            }
            for (b, row) in plane.into_iter().enumerate() {
                if row.len() != n {
                    return Err(shape_err());
                }
                for (c, &v) in row.iter().enumerate() {
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(Error::TwoMetric(format!(
                            "sigma({a},{b},{c}) = {v} is not a finite nonnegative value"
                        )));
                    }
                }
                flat.extend(row);
            }
        }
        Ok(TwoMetricTable {
            labels,
            sigma: flat,
        })
    }

    /// Builds a table from a function of three indices.
    pub fn from_fn(labels: Vec<String>, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let n = labels.len();
        let mut sigma = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    sigma.push(f(a, b, c));
                }
            }
        }
        TwoMetricTable { labels, sigma }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        let n = self.labels.len();
        self.sigma[(a * n + b) * n + c]
    }

    /// Checks that `sigma` vanishes exactly when two arguments coincide and
    /// is invariant under all six argument permutations.
    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.get(a, b, c);
                    let degenerate = a == b || b == c || a == c;
                    if degenerate != (v == 0.0) {
                        return Err(Error::TwoMetric(format!(
                            "sigma({}, {}, {}) = {v} violates the zero pattern",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                    for (p, q, r) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        if self.get(p, q, r) != v {
                            return Err(Error::TwoMetric(format!(
                                "sigma is not permutation invariant at ({}, {}, {})",
                                self.labels[a], self.labels[b], self.labels[c]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `D(x, y) = max_a sigma(a, x, y)`.
pub fn from_two_metric(table: &TwoMetricTable) -> Result<FiniteSpace> {
    table.validate()?;
    let n = table.labels.len();
    let matrix = DistanceMatrix::from_fn(n, |x, y| {
        (0..n).map(|a| table.get(a, x, y)).fold(0.0, f64::max)
    });
    FiniteSpace::new(table.labels.clone(), matrix)
}
