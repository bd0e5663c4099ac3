//! Ball topology on finite and sampled spaces.
//!
//! Every off-diagonal distance of a finite space passing the identity axiom
//! is positive, so the ball topology is discrete. The operations here
//! therefore report witness radii and tolerance-parameterized closures,
//! which stay meaningful when the finite space samples an infinite one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::ext_real_pairs;
use crate::sequences::{tail_deviation, SequenceSample};
use crate::space::{FiniteSpace, Point};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: String,
    pub radius: f64,
    pub closed: bool,
}

impl Ball {
    pub fn open(center: impl Into<String>, radius: f64) -> Self {
        Ball {
            center: center.into(),
            radius,
            closed: false,
        }
    }

    pub fn closed(center: impl Into<String>, radius: f64) -> Self {
        Ball {
            center: center.into(),
            radius,
            closed: true,
        }
    }
}

/// A subset of a space's points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: Vec<bool>,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask {
            bits: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        SubsetMask {
            bits: vec![true; n],
        }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = SubsetMask::empty(n);
        for i in indices {
            if i >= n {
                return Err(Error::Argument(format!(
                    "index {i} out of range for {n} points"
                )));
            }
            mask.bits[i] = true;
        }
        Ok(mask)
    }

    pub fn from_labels<S: AsRef<str>>(space: &FiniteSpace, labels: &[S]) -> Result<Self> {
        let indices = labels
            .iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        SubsetMask::from_indices(space.len(), indices)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i] = true;
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &SubsetMask) -> bool {
        self.bits.len() == other.bits.len()
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Member labels in point order.
    pub fn labels(&self, space: &FiniteSpace) -> Vec<String> {
        self.indices().map(|i| space.label(i).to_string()).collect()
    }

    fn check(&self, space: &FiniteSpace) -> Result<()> {
        if self.len() != space.len() {
            return Err(Error::Argument(format!(
                "mask covers {} points, space has {}",
                self.len(),
                space.len()
            )));
        }
        Ok(())
    }
}

/// Members of a ball by row scan: `D(c, y) < r` when open, `<= r` when
/// closed.
pub fn ball_members(space: &FiniteSpace, ball: &Ball) -> Result<SubsetMask> {
    if !(ball.radius > 0.0) {
        return Err(Error::Argument(format!(
            "radius must be positive, got {}",
            ball.radius
        )));
    }
    let c = space.index_of(&ball.center)?;
    let inside = |d: f64| {
        if ball.closed {
            d <= ball.radius
        } else {
            d < ball.radius
        }
    };
    SubsetMask::from_indices(
        space.len(),
        (0..space.len()).filter(|&y| inside(space.d(c, y))),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpenReport {
    pub open: bool,
    /// For each member `x`, the largest `r` with `B(x, r)` inside the set
    /// (`+inf` when the complement is empty).
    #[serde(serialize_with = "ext_real_pairs")]
    pub witness_radii: Vec<(String, f64)>,
}

/// Openness by witness radii `r(x) = min_{y outside} D(x, y)`.
pub fn is_f_open(space: &FiniteSpace, mask: &SubsetMask) -> Result<OpenReport> {
    mask.check(space)?;
    let witness_radii: Vec<(String, f64)> = mask
        .indices()
        .map(|x| {
            let r = (0..space.len())
                .filter(|&y| !mask.contains(y))
                .map(|y| space.d(x, y))
                .fold(f64::INFINITY, f64::min);
            (space.label(x).to_string(), r)
        })
        .collect();
    Ok(OpenReport {
        open: witness_radii.iter().all(|&(_, r)| r > 0.0),
        witness_radii,
    })
}

/// `{x : min_{a in mask} D(x, a) <= tol}`.
pub fn closure_approx(space: &FiniteSpace, mask: &SubsetMask, tol: f64) -> Result<SubsetMask> {
    mask.check(space)?;
    if !(tol >= 0.0) {
        return Err(Error::Argument(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let members: Vec<usize> = mask.indices().collect();
    SubsetMask::from_indices(
        space.len(),
        (0..space.len()).filter(|&x| members.iter().any(|&a| space.d(x, a) <= tol)),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JalReport {
    pub passed: bool,
    pub limit: String,
    pub tol: f64,
    /// Point with the largest `D(x, y) - (tail max + tol)`.
    pub worst: Option<String>,
    pub worst_gap: f64,
}

/// Sampled closed-ball condition: `D(x, y) <= max_{tail} D(x_n, y) + tol`
/// for every declared `y`, given a sample converging to `x` within `tol`.
pub fn check_jal(
    space: &FiniteSpace,
    seq: &SequenceSample,
    limit: Point,
    tol: f64,
) -> Result<JalReport> {
    if !(tol > 0.0) {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let points = seq.resolve(space)?;
    let (deviation, index) = tail_deviation(space, &points, seq.tail_start(), limit)?;
    if deviation > tol {
        return Err(Error::Precondition(format!(
            "sample does not converge to {}: tail deviation {deviation} at index {index} exceeds {tol}",
            space.describe(limit)
        )));
    }
    let mut worst: Option<(usize, f64)> = None;
    for y in 0..space.len() {
        let target = Point::Index(y);
        let limsup = points[seq.tail_start()..]
            .iter()
            .map(|&p| space.distance(p, target))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let gap = space.distance(limit, target)? - (limsup + tol);
        if worst.is_none_or(|(_, g)| gap > g) {
            worst = Some((y, gap));
        }
    }
    let (worst, worst_gap) = match worst {
        Some((y, g)) => (Some(space.label(y).to_string()), g),
        None => (None, f64::NEG_INFINITY),
    };
    Ok(JalReport {
        passed: worst_gap <= 0.0,
        limit: space.describe(limit),
        tol,
        worst,
        worst_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub radius: f64,
    pub centers: Vec<String>,
    pub covered: bool,
    pub rounds: usize,
}

/// Greedy `r`-net of a subset: repeatedly takes the lowest-index point not
/// yet covered by an open ball `B(center, r)` as a new center. Centers end
/// up pairwise at least `r` apart.
pub fn greedy_net(space: &FiniteSpace, mask: &SubsetMask, r: f64) -> Result<CoverReport> {
    mask.check(space)?;
    if !(r > 0.0) {
        return Err(Error::Argument(format!("radius must be positive, got {r}")));
    }
    if mask.count() == 0 {
        return Err(Error::Argument("cannot cover an empty subset".into()));
    }
    let mut covered = SubsetMask::empty(space.len());
    let mut centers = Vec::new();
    while let Some(c) = mask.indices().find(|&x| !covered.contains(x)) {
        centers.push(c);
        for y in mask.indices() {
            if space.d(c, y) < r {
                covered.insert(y);
            }
        }
        // A center with D(c, c) >= r would never cover itself.
        covered.insert(c);
    }
    let all_covered = mask
        .indices()
        .all(|y| centers.iter().any(|&c| space.d(c, y) < r));
    Ok(CoverReport {
        radius: r,
        rounds: centers.len(),
        centers: centers
            .iter()
            .map(|&c| space.label(c).to_string())
            .collect(),
        covered: all_covered,
    })
}
