//! Finite candidate spaces.

mod chain;
mod classify;
mod generate;
mod load;
mod two_metric;

use serde::Serialize;

use crate::error::{Error, Result};

pub use chain::shortest_chain_infimum;
pub(crate) use classify::worst_excess;
pub use classify::{
    check_d1_d2, check_d3, classify, min_alpha, AlphaEstimate, AxiomFragment, ClassificationReport,
    D3Report, PairExcess,
};
pub use generate::{gen_exp, gen_hybrid, gen_square_grid, Family};
pub use load::{load_space, parse_csv, parse_descriptor, to_csv, SpaceDescriptor};
pub use two_metric::{from_two_metric, TwoMetricTable};

/// Dense row-major square matrix of distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn zeros(n: usize) -> Self {
        DistanceMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from rows, checking squareness and that every entry
    /// is finite and nonnegative.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::InvalidEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
            data.extend(row);
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DistanceMatrix { n, data }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Largest entry, or 0 for an empty matrix.
    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }
}

impl Serialize for DistanceMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// A location in a space: a declared point, or a coordinate of the
/// parametric family the space was generated from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Index(usize),
    Coord(f64),
}

/// A labelled point set with a candidate distance matrix.
///
/// Loading validates only shape and sign; the axioms are checked by
/// [`check_d1_d2`] and [`check_d3`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    matrix: DistanceMatrix,
    family: Option<(Family, Vec<f64>)>,
}

impl FiniteSpace {
    pub fn new(labels: Vec<String>, matrix: DistanceMatrix) -> Result<Self> {
        if labels.len() != matrix.len() {
            return Err(Error::Malformed(format!(
                "{} labels for a {}x{} matrix",
                labels.len(),
                matrix.len(),
                matrix.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Malformed(format!("duplicate label `{l}`")));
            }
        }
        Ok(FiniteSpace {
            labels,
            matrix,
            family: None,
        })
    }

    /// Space with labels `0..n`.
    pub fn from_matrix(matrix: DistanceMatrix) -> Self {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        FiniteSpace {
            labels,
            matrix,
            family: None,
        }
    }

    pub(crate) fn with_family(
        labels: Vec<String>,
        family: Family,
        coords: Vec<f64>,
    ) -> FiniteSpace {
        let matrix = DistanceMatrix::from_fn(coords.len(), |i, j| {
            if i == j {
                0.0
            } else {
                family.distance(coords[i], coords[j])
            }
        });
        FiniteSpace {
            labels,
            matrix,
            family: Some((family, coords)),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn family(&self) -> Option<Family> {
        self.family.as_ref().map(|(f, _)| *f)
    }

    pub fn coords(&self) -> Option<&[f64]> {
        self.family.as_ref().map(|(_, c)| c.as_slice())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Resolves a label; on parametric spaces a numeric string that is not
    /// a label becomes a coordinate.
    pub fn point(&self, label: &str) -> Result<Point> {
        match self.index_of(label) {
            Ok(i) => Ok(Point::Index(i)),
            Err(e) => match (self.family.is_some(), label.trim().parse::<f64>()) {
                (true, Ok(c)) if c.is_finite() => Ok(Point::Coord(c)),
                _ => Err(e),
            },
        }
    }

    /// Distance between two locations. Coordinates require a parametric
    /// space; declared points use the matrix.
    pub fn distance(&self, a: Point, b: Point) -> Result<f64> {
        match (a, b) {
            (Point::Index(i), Point::Index(j)) => {
                self.check_index(i)?;
                self.check_index(j)?;
                Ok(self.d(i, j))
            }
            _ => {
                let (family, coords) = self.family.as_ref().ok_or_else(|| {
                    Error::Argument("coordinates need a parametric (generated) space".into())
                })?;
                let coord = |p: Point| -> Result<f64> {
                    match p {
                        Point::Index(i) => {
                            self.check_index(i)?;
                            Ok(coords[i])
                        }
                        Point::Coord(c) => Ok(c),
                    }
                };
                let (x, y) = (coord(a)?, coord(b)?);
                Ok(if x == y { 0.0 } else { family.distance(x, y) })
            }
        }
    }

    /// Human-readable name of a location.
    pub fn describe(&self, p: Point) -> String {
        match p {
            Point::Index(i) => self
                .labels
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("#{i}")),
            Point::Coord(c) => c.to_string(),
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownLabel(format!("#{i}")))
        }
    }
}
