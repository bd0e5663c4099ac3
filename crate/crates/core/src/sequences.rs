//! Verdicts on finitely sampled sequences.
//!
//! Limits over infinite tails are replaced by maxima over the sampled tail
//! `points[tail_start..]`, compared against a user tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::{Gauge, ToleranceQuery, DEFAULT_BUDGET};
use crate::space::{FiniteSpace, Point};

/// A sequence entry: a point label, or a coordinate on a parametric space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeqPoint {
    Label(String),
    Coord(f64),
}

impl From<&str> for SeqPoint {
    fn from(label: &str) -> Self {
        SeqPoint::Label(label.to_string())
    }
}

impl From<f64> for SeqPoint {
    fn from(c: f64) -> Self {
        SeqPoint::Coord(c)
    }
}

/// A finite prefix of a sequence with its tail start and tolerance.
///
/// JSON form: `{"points": ["0", "1", 0.5], "tail_start": 1, "tol": 0.01}`;
/// `tail_start` defaults to half the sample length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSample")]
pub struct SequenceSample {
    points: Vec<SeqPoint>,
    tail_start: usize,
    tol: f64,
}

#[derive(Deserialize)]
struct RawSample {
    points: Vec<SeqPoint>,
    tail_start: Option<usize>,
    tol: f64,
}

impl TryFrom<RawSample> for SequenceSample {
    type Error = Error;

    fn try_from(raw: RawSample) -> Result<Self> {
        SequenceSample::new(raw.points, raw.tail_start, raw.tol)
    }
}

impl SequenceSample {
    pub fn new(points: Vec<SeqPoint>, tail_start: Option<usize>, tol: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument("sequence sample is empty".into()));
        }
        let tail_start = tail_start.unwrap_or(points.len() / 2);
        if tail_start >= points.len() {
            return Err(Error::Argument(format!(
                "tail start {tail_start} is past the sample length {}",
                points.len()
            )));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Argument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(SequenceSample {
            points,
            tail_start,
            tol,
        })
    }

    pub fn points(&self) -> &[SeqPoint] {
        &self.points
    }

    pub fn tail_start(&self) -> usize {
        self.tail_start
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_tol(&self, tol: f64) -> Result<Self> {
        SequenceSample::new(self.points.clone(), Some(self.tail_start), tol)
    }

    pub fn with_tail_start(&self, tail_start: usize) -> Result<Self> {
        SequenceSample::new(self.points.clone(), Some(tail_start), self.tol)
    }

    /// Resolves every entry against `space`.
    pub fn resolve(&self, space: &FiniteSpace) -> Result<Vec<Point>> {
        self.points
            .iter()
            .map(|p| match p {
                SeqPoint::Label(l) => space.point(l),
                SeqPoint::Coord(c) if space.family().is_some() => Ok(Point::Coord(*c)),
                SeqPoint::Coord(c) => Err(Error::Argument(format!(
                    "coordinate {c} given for a space without a parametric family"
                ))),
            })
            .collect()
    }
}

/// `(max_{n >= tail} D(x_n, x), argmax)`.
pub(crate) fn tail_deviation(
    space: &FiniteSpace,
    points: &[Point],
    tail_start: usize,
    limit: Point,
) -> Result<(f64, usize)> {
    let mut worst = (0.0, tail_start);
    for (n, &p) in points.iter().enumerate().skip(tail_start) {
        let d = space.distance(p, limit)?;
        if d > worst.0 {
            worst = (d, n);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub passed: bool,
    pub limit: String,
    pub max_deviation: f64,
    /// Tail index attaining the deviation.
    pub worst_index: usize,
    pub tail_start: usize,
    pub tol: f64,
}

/// Passes iff `max_{n >= tail} D(x_n, x) <= tol`.
pub fn is_f_convergent_to(
    space: &FiniteSpace,
    seq: &SequenceSample,
    limit: Point,
) -> Result<ConvergenceReport> {
    let points = seq.resolve(space)?;
    let (max_deviation, worst_index) = tail_deviation(space, &points, seq.tail_start, limit)?;
    Ok(ConvergenceReport {
        passed: max_deviation <= seq.tol,
        limit: space.describe(limit),
        max_deviation,
        worst_index,
        tail_start: seq.tail_start,
        tol: seq.tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyReport {
    pub passed: bool,
    pub max_deviation: f64,
    /// Tail index pair attaining the deviation.
    pub witness: Option<(usize, usize)>,
    pub tail_start: usize,
    pub tol: f64,
}

/// Passes iff `max_{n, m >= tail} D(x_n, x_m) <= tol`.
pub fn is_f_cauchy(space: &FiniteSpace, seq: &SequenceSample) -> Result<CauchyReport> {
    let points = seq.resolve(space)?;
    let mut max_deviation = 0.0;
    let mut witness = None;
    for n in seq.tail_start..points.len() {
        for m in n + 1..points.len() {
            let d = space.distance(points[n], points[m])?;
            if d > max_deviation {
                max_deviation = d;
                witness = Some((n, m));
            }
        }
    }
    Ok(CauchyReport {
        passed: max_deviation <= seq.tol,
        max_deviation,
        witness,
        tail_start: seq.tail_start,
        tol: seq.tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitUniquenessReport {
    pub passed: bool,
    pub x: String,
    pub y: String,
    pub distance: f64,
    /// Both candidates passed because the tolerance is at least their
    /// distance.
    pub tolerance_clash: bool,
    pub tol: f64,
    pub note: String,
}

/// Given a sample converging (within tolerance) to both `x` and `y`,
/// reports whether they coincide. Distinct candidates mean the tolerance is
/// too loose to separate them, which is reported as a clash.
pub fn assert_limit_unique(
    space: &FiniteSpace,
    seq: &SequenceSample,
    x: Point,
    y: Point,
) -> Result<LimitUniquenessReport> {
    for cand in [x, y] {
        let r = is_f_convergent_to(space, seq, cand)?;
        if !r.passed {
            return Err(Error::Precondition(format!(
                "sample is not convergent to {}: tail deviation {} at index {} exceeds {}",
                r.limit, r.max_deviation, r.worst_index, r.tol
            )));
        }
    }
    let distance = space.distance(x, y)?;
    let passed = distance == 0.0;
    let tolerance_clash = !passed && seq.tol >= distance;
    let note = if passed {
        "candidates coincide".to_string()
    } else {
        format!(
            "tolerance {} does not separate candidates at distance {}; tighten tol or extend the sample",
            seq.tol, distance
        )
    };
    Ok(LimitUniquenessReport {
        passed,
        x: space.describe(x),
        y: space.describe(y),
        distance,
        tolerance_clash,
        tol: seq.tol,
        note,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub passed: bool,
    pub epsilon: f64,
    pub resolved: ToleranceQuery,
    /// Tail pairs with `D(x_n, x) + D(x_m, x) < delta`.
    pub pairs_triggered: usize,
    pub pairs_checked: usize,
    /// First triggered pair with `D(x_n, x_m) >= eps`.
    pub witness: Option<(usize, usize)>,
}

/// Quantitative convergent-implies-Cauchy check: with `delta = delta(eps)`
/// from the gauge, every tail pair whose distances to the limit sum below
/// `delta` must be within `eps` of each other.
pub fn convergent_implies_cauchy(
    space: &FiniteSpace,
    gauge: &Gauge,
    seq: &SequenceSample,
    limit: Point,
    epsilon: f64,
) -> Result<ImplicationReport> {
    let conv = is_f_convergent_to(space, seq, limit)?;
    if !conv.passed {
        return Err(Error::Precondition(format!(
            "sample is not convergent to {}: tail deviation {} exceeds {}",
            conv.limit, conv.max_deviation, conv.tol
        )));
    }
    let resolved = gauge.delta_for_epsilon(epsilon, DEFAULT_BUDGET)?;
    let points = seq.resolve(space)?;
    let to_limit = points
        .iter()
        .map(|&p| space.distance(p, limit))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs_checked = 0;
    let mut pairs_triggered = 0;
    let mut witness = None;
    for n in seq.tail_start..points.len() {
        for m in n + 1..points.len() {
            pairs_checked += 1;
            if to_limit[n] + to_limit[m] < resolved.delta {
                pairs_triggered += 1;
                if witness.is_none() && !(space.distance(points[n], points[m])? < epsilon) {
                    witness = Some((n, m));
                }
            }
        }
    }
    Ok(ImplicationReport {
        passed: witness.is_none(),
        epsilon,
        resolved,
        pairs_triggered,
        pairs_checked,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub passed: bool,
    /// Smallest `N` with every pair in `points[N..]` closer than the
    /// threshold.
    pub index: usize,
    pub threshold: f64,
    pub tail_start: usize,
}

/// Passes iff every tail pair is closer than `threshold`. On spaces whose
/// off-diagonal distances are all at least `threshold`, this forces the
/// tail to be constant.
pub fn eventually_constant(
    space: &FiniteSpace,
    seq: &SequenceSample,
    threshold: f64,
) -> Result<StabilizationReport> {
    if !(threshold > 0.0) {
        return Err(Error::Argument(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let points = seq.resolve(space)?;
    let len = points.len();
    // suffix_max[n] = max pairwise distance within points[n..].
    let mut suffix_max = vec![0.0f64; len + 1];
    for n in (0..len).rev() {
        let mut row = suffix_max[n + 1];
        for m in n + 1..len {
            row = row.max(space.distance(points[n], points[m])?);
        }
        suffix_max[n] = row;
    }
    let index = (0..len)
        .find(|&n| suffix_max[n] < threshold)
        .unwrap_or(len - 1);
    Ok(StabilizationReport {
        passed: index <= seq.tail_start,
        index,
        threshold,
        tail_start: seq.tail_start,
    })
}
