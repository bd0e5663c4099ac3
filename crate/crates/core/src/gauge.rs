//! Gauge pairs `(f, alpha)`.
//!
//! `f` must be non-decreasing on `(0, inf)` and diverge to `-inf` at `0+`;
//! `alpha >= 0` is the additive shift of the generalized triangle
//! inequality. Both axioms are checked numerically on user-supplied probes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative safety margin of the `delta(eps)` resolver.
pub const DEFAULT_MARGIN: f64 = 1.0 / 1_048_576.0;

/// Default probe budget of the `delta(eps)` resolver.
pub const DEFAULT_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum GaugeKind {
    /// `t -> ln t`
    Log,
    /// `t -> -1/t`
    NegReciprocal,
    /// Piecewise-linear interpolation through `(t, f(t))` knots with
    /// strictly increasing `t`.
    Table(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gauge {
    kind: GaugeKind,
    alpha: f64,
}

impl Gauge {
    pub fn new(kind: GaugeKind, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Argument(format!(
                "alpha must be finite and nonnegative, got {alpha}"
            )));
        }
        if let GaugeKind::Table(knots) = &kind {
            if knots.is_empty() {
                return Err(Error::Argument("gauge table has no knots".into()));
            }
            for (i, &(t, v)) in knots.iter().enumerate() {
                if !(t > 0.0 && t.is_finite() && v.is_finite()) {
                    return Err(Error::Argument(format!(
                        "gauge table knot {i} = ({t}, {v}) must have finite t > 0 and finite value"
                    )));
                }
                if i > 0 && knots[i - 1].0 >= t {
                    return Err(Error::Argument(format!(
                        "gauge table abscissae must be strictly increasing (knot {i})"
                    )));
                }
            }
        }
        Ok(Gauge { kind, alpha })
    }

    pub fn log(alpha: f64) -> Result<Self> {
        Gauge::new(GaugeKind::Log, alpha)
    }

    pub fn neg_reciprocal(alpha: f64) -> Result<Self> {
        Gauge::new(GaugeKind::NegReciprocal, alpha)
    }

    pub fn table(knots: Vec<(f64, f64)>, alpha: f64) -> Result<Self> {
        Gauge::new(GaugeKind::Table(knots), alpha)
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same shape, different shift.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Gauge::new(self.kind.clone(), alpha)
    }

    /// Short name used in reports.
    pub fn name(&self) -> &'static str {
        match self.kind {
            GaugeKind::Log => "log",
            GaugeKind::NegReciprocal => "neg_reciprocal",
            GaugeKind::Table(_) => "table",
        }
    }

    /// Whether the gauge is continuous everywhere on `(0, inf)`.
    ///
    /// Table gauges are continuous inside their knot range but undefined
    /// outside it, so they are treated as not qualifying.
    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, GaugeKind::Table(_))
    }

    /// Evaluates `f(t)` for `t > 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(t));
        }
        match &self.kind {
            GaugeKind::Log => Ok(t.ln()),
            GaugeKind::NegReciprocal => Ok(-1.0 / t),
            GaugeKind::Table(knots) => interpolate(knots, t),
        }
    }

    /// Lists every adjacent grid pair `(s, t)` with `f(s) > f(t)`.
    pub fn check_f1(&self, grid: &[f64]) -> Result<MonotonicityReport> {
        if grid.is_empty() {
            return Err(Error::Argument("probe grid is empty".into()));
        }
        for (i, &t) in grid.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Argument(format!("probe {t} is not a positive real")));
            }
            if i > 0 && grid[i - 1] >= t {
                return Err(Error::Argument(format!(
                    "probe grid must be strictly increasing (position {i})"
                )));
            }
        }
        let values = grid
            .iter()
            .map(|&t| self.eval(t))
            .collect::<Result<Vec<_>>>()?;
        let violations: Vec<(f64, f64)> = grid
            .windows(2)
            .zip(values.windows(2))
            .filter(|(_, v)| v[0] > v[1])
            .map(|(t, _)| (t[0], t[1]))
            .collect();
        Ok(MonotonicityReport {
            passed: violations.is_empty(),
            probes: grid.len(),
            violations,
        })
    }

    /// One-sided numeric surrogate of the divergence axiom: passes iff `f`
    /// at the last (smallest) schedule entry is below `floor`.
    pub fn check_f2(&self, schedule: &[f64], floor: f64) -> Result<DivergenceReport> {
        if schedule.len() < 2 {
            return Err(Error::Argument(
                "divergence schedule needs at least two entries".into(),
            ));
        }
        for (i, &t) in schedule.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Argument(format!(
                    "schedule entry {t} is not positive"
                )));
            }
            if i > 0 && schedule[i - 1] <= t {
                return Err(Error::Argument(format!(
                    "schedule must be strictly decreasing (position {i})"
                )));
            }
        }
        let last = *schedule.last().expect("non-empty");
        let attained = self.eval(last)?;
        Ok(DivergenceReport {
            passed: attained < floor,
            probe: last,
            attained,
            floor,
        })
    }

    /// Resolves `delta` with `f(t) < f(eps) - alpha` for `0 < t < delta`,
    /// using the default margin.
    pub fn delta_for_epsilon(&self, epsilon: f64, budget: usize) -> Result<ToleranceQuery> {
        self.delta_for_epsilon_with_margin(epsilon, budget, DEFAULT_MARGIN)
    }

    /// Halves downward from `eps` until the shifted sublevel is reached,
    /// then bisects the last bracket until it is narrower than
    /// `margin * eps`. The returned `delta` is the best probe known to lie in
    /// the sublevel, so `delta <= eps` and `f(delta * (1 - margin))` is
    /// strictly below the target whenever `f` is non-decreasing.
    pub fn delta_for_epsilon_with_margin(
        &self,
        epsilon: f64,
        budget: usize,
        margin: f64,
    ) -> Result<ToleranceQuery> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Argument(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if budget == 0 {
            return Err(Error::Argument("resolver budget must be at least 1".into()));
        }
        if !(margin > 0.0 && margin < 1.0) {
            return Err(Error::Argument(format!(
                "margin must lie in (0, 1), got {margin}"
            )));
        }
        let fail = |reason: String| Error::Resolution { epsilon, reason };
        let target = self.eval(epsilon)? - self.alpha;
        let below = |t: f64| -> Result<bool> {
            match self.eval(t) {
                Ok(v) => Ok(v < target),
                Err(e @ Error::OutOfRange { .. }) => Err(fail(e.to_string())),
                Err(e) => Err(e),
            }
        };

        let mut probes = 0;
        let mut lo = epsilon;
        let mut hi = None;
        loop {
            probes += 1;
            if probes > budget {
                return Err(fail(format!("sublevel not reached within {budget} probes")));
            }
            if below(lo)? {
                break;
            }
            hi = Some(lo);
            lo /= 2.0;
            if lo == 0.0 {
                return Err(fail("probe underflowed to zero".into()));
            }
        }
        if let Some(mut hi) = hi {
            let width = margin * epsilon;
            while hi - lo > width {
                probes += 1;
                if probes > budget {
                    return Err(fail(format!(
                        "bisection did not settle within {budget} probes"
                    )));
                }
                let mid = 0.5 * (lo + hi);
                if below(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let delta = lo;
        if !below(delta * (1.0 - margin))? {
            return Err(fail(format!(
                "gauge is not monotone near {delta}; shrunken probe left the sublevel"
            )));
        }
        Ok(ToleranceQuery {
            epsilon,
            delta,
            margin,
        })
    }
}

fn interpolate(knots: &[(f64, f64)], t: f64) -> Result<f64> {
    let (lo, hi) = (knots[0].0, knots[knots.len() - 1].0);
    if t < lo || t > hi {
        return Err(Error::OutOfRange { t, lo, hi });
    }
    // First knot with abscissa >= t.
    let idx = knots.partition_point(|&(x, _)| x < t);
    let (x1, y1) = knots[idx];
    if x1 == t || idx == 0 {
        return Ok(y1);
    }
    let (x0, y0) = knots[idx - 1];
    Ok(y0 + (y1 - y0) * (t - x0) / (x1 - x0))
}

/// A resolved `delta(eps)` threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceQuery {
    pub epsilon: f64,
    pub delta: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub passed: bool,
    pub probes: usize,
    /// Adjacent probe pairs `(s, t)` with `f(s) > f(t)`.
    pub violations: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub passed: bool,
    pub probe: f64,
    pub attained: f64,
    pub floor: f64,
}

/// JSON gauge descriptor:
/// `{"kind": "log" | "neg_reciprocal" | "table", "alpha": 1.0, "table": [[t, f], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeDescriptor {
    pub kind: String,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<[f64; 2]>,
}

impl TryFrom<GaugeDescriptor> for Gauge {
    type Error = Error;

    fn try_from(desc: GaugeDescriptor) -> Result<Gauge> {
        let kind = match desc.kind.as_str() {
            "log" => GaugeKind::Log,
            "neg_reciprocal" => GaugeKind::NegReciprocal,
            "table" => GaugeKind::Table(desc.table.iter().map(|k| (k[0], k[1])).collect()),
            other => return Err(Error::Malformed(format!("unknown gauge kind `{other}`"))),
        };
        Gauge::new(kind, desc.alpha)
    }
}

impl From<&Gauge> for GaugeDescriptor {
    fn from(g: &Gauge) -> Self {
        let table = match &g.kind {
            GaugeKind::Table(knots) => knots.iter().map(|&(t, v)| [t, v]).collect(),
            _ => Vec::new(),
        };
        GaugeDescriptor {
            kind: g.name().to_string(),
            alpha: g.alpha,
            table,
        }
    }
}

impl Serialize for Gauge {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GaugeDescriptor::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Gauge {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let desc = GaugeDescriptor::deserialize(deserializer)?;
        Gauge::try_from(desc).map_err(serde::de::Error::custom)
    }
}
