//! The chain-infimum metric and F-metric boundedness.
//!
//! For a space satisfying the identity and symmetry axioms, the infimum of
//! chain sums `d` is a genuine metric with `d <= D`. A gauge `(f, alpha)`
//! witnesses the generalized triangle inequality for `D` exactly when
//! `f(d) <= f(D) <= f(d) + alpha` holds pairwise (for right-continuous `f`);
//! the reverse implication holds for any metric sandwiched this way.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::space::{self, check_d3, D3Report, DistanceMatrix, FiniteSpace, PairExcess};
use crate::GAUGE_SLACK;

/// Relative slack on the triangle inequality for externally supplied
/// metrics.
pub const EXTERNAL_TRIANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricAxiomReport {
    pub identity_ok: bool,
    pub symmetry_ok: bool,
    pub positivity_ok: bool,
    pub triangle_ok: bool,
    /// First nonzero diagonal entry.
    pub identity_witness: Option<String>,
    pub symmetry_witness: Option<(String, String)>,
    pub positivity_witness: Option<(String, String)>,
    /// `(x, y, z)` with `d(x, z) > d(x, y) + d(y, z)`.
    pub triangle_witness: Option<(String, String, String)>,
}

impl MetricAxiomReport {
    pub fn passed(&self) -> bool {
        self.identity_ok && self.symmetry_ok && self.positivity_ok && self.triangle_ok
    }
}

/// Checks the metric axioms over all pairs and triples; `triangle_slack` is
/// relative to the right-hand side.
pub fn check_metric_axioms(
    labels: &[String],
    d: &DistanceMatrix,
    triangle_slack: f64,
) -> MetricAxiomReport {
    let n = d.len();
    let name = |i: usize| labels[i].clone();
    let identity_witness = (0..n).find(|&i| d.get(i, i) != 0.0).map(name);
    let mut symmetry_witness = None;
    let mut positivity_witness = None;
    let mut triangle_witness = None;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            if symmetry_witness.is_none() && d.get(x, y) != d.get(y, x) {
                symmetry_witness = Some((name(x), name(y)));
            }
            if positivity_witness.is_none() && !(d.get(x, y) > 0.0) {
                positivity_witness = Some((name(x), name(y)));
            }
            if triangle_witness.is_none() {
                for z in 0..n {
                    let via = d.get(x, y) + d.get(y, z);
                    if d.get(x, z) > via * (1.0 + triangle_slack) {
                        triangle_witness = Some((name(x), name(y), name(z)));
                        break;
                    }
                }
            }
        }
    }
    MetricAxiomReport {
        identity_ok: identity_witness.is_none(),
        symmetry_ok: symmetry_witness.is_none(),
        positivity_ok: positivity_witness.is_none(),
        triangle_ok: triangle_witness.is_none(),
        identity_witness,
        symmetry_witness,
        positivity_witness,
        triangle_witness,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedMetric {
    pub labels: Vec<String>,
    pub d: DistanceMatrix,
    pub axiom_report: MetricAxiomReport,
}

impl DerivedMetric {
    /// The derived metric viewed as a space of its own.
    pub fn to_space(&self) -> FiniteSpace {
        FiniteSpace::new(self.labels.clone(), self.d.clone()).expect("labels match matrix")
    }

    pub fn to_csv(&self) -> String {
        space::to_csv(&self.labels, &self.d)
    }
}

/// Builds the chain-infimum metric and audits it over all triples.
pub fn derive_metric(space: &FiniteSpace) -> DerivedMetric {
    let d = space::shortest_chain_infimum(space);
    let axiom_report = check_metric_axioms(space.labels(), &d, 0.0);
    DerivedMetric {
        labels: space.labels().to_vec(),
        d,
        axiom_report,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub passed: bool,
    /// `f(d) <= f(D)` at every pair.
    pub lower_ok: bool,
    /// `f(D) <= f(d) + alpha` at every pair.
    pub upper_ok: bool,
    /// Largest `f(D) - f(d)`, 0 when there are no pairs.
    pub worst_slack: f64,
    pub witness: Option<PairExcess>,
    pub gauge: Gauge,
}

/// Checks `f(d) <= f(D) <= f(d) + alpha` at every pair with `D(x, y) > 0`.
pub fn check_sandwich(
    space: &FiniteSpace,
    gauge: &Gauge,
    derived: &DerivedMetric,
) -> Result<SandwichReport> {
    sandwich_against(space, gauge, &derived.d)
}

/// [`check_sandwich`] against an arbitrary reference matrix.
pub fn sandwich_against(
    space: &FiniteSpace,
    gauge: &Gauge,
    reference: &DistanceMatrix,
) -> Result<SandwichReport> {
    if reference.len() != space.len() {
        return Err(Error::Argument(format!(
            "reference metric has {} points, space has {}",
            reference.len(),
            space.len()
        )));
    }
    let n = space.len();
    let mut lower_ok = true;
    for i in 0..n {
        for j in 0..n {
            if i != j && space.d(i, j) > 0.0 {
                let lower = gauge.eval(reference.get(i, j))?;
                if lower > gauge.eval(space.d(i, j))? + GAUGE_SLACK {
                    lower_ok = false;
                }
            }
        }
    }
    let witness = space::worst_excess(space, reference, gauge)?;
    let worst_slack = witness.as_ref().map_or(0.0, |w| w.excess.max(0.0));
    let upper_ok = worst_slack <= gauge.alpha() + GAUGE_SLACK;
    Ok(SandwichReport {
        passed: lower_ok && upper_ok,
        lower_ok,
        upper_ok,
        worst_slack,
        witness,
        gauge: gauge.clone(),
    })
}

/// Given a metric `external` sandwiching `D` under `gauge`, returns the
/// verdict of the generalized triangle inequality check (which must pass).
pub fn boundedness_implies_d3(
    space: &FiniteSpace,
    gauge: &Gauge,
    external: &DistanceMatrix,
) -> Result<D3Report> {
    if external.len() != space.len() {
        return Err(Error::MetricAxiom(format!(
            "supplied metric has {} points, space has {}",
            external.len(),
            space.len()
        )));
    }
    let axioms = check_metric_axioms(space.labels(), external, EXTERNAL_TRIANGLE_SLACK);
    if !axioms.passed() {
        let detail = serde_json::to_string(&axioms).unwrap_or_default();
        return Err(Error::MetricAxiom(detail));
    }
    let sandwich = sandwich_against(space, gauge, external)?;
    if !sandwich.passed {
        let (x, y) = sandwich
            .witness
            .as_ref()
            .map(|w| (w.x.clone(), w.y.clone()))
            .unwrap_or_default();
        let detail = if sandwich.lower_ok {
            format!(
                "f(D) - f(d) = {} exceeds alpha = {}",
                sandwich.worst_slack,
                gauge.alpha()
            )
        } else {
            "f(d) exceeds f(D)".to_string()
        };
        return Err(Error::Sandwich { x, y, detail });
    }
    check_d3(space, gauge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{gen_exp, gen_hybrid, min_alpha};
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn line(points: &[f64]) -> FiniteSpace {
        FiniteSpace::from_matrix(DistanceMatrix::from_fn(points.len(), |i, j| {
            (points[i] - points[j]).abs()
        }))
    }

    #[test]
    fn derive_examples() {
        let dm = derive_metric(&gen_hybrid(5).unwrap());
        assert_eq!(dm.d.get(1, 3), 2.0);
        assert!(dm.axiom_report.passed());

        let s = line(&[0.0, 0.5, 2.0, 4.5]);
        assert_eq!(&derive_metric(&s).d, s.matrix());

        let dm = derive_metric(&gen_exp(2).unwrap());
        assert_eq!(dm.d.get(0, 2), 2.0 * E);
    }

    #[test]
    fn sandwich_examples() {
        let s = gen_hybrid(5).unwrap();
        let dm = derive_metric(&s);
        let r = check_sandwich(&s, &Gauge::log(3f64.ln()).unwrap(), &dm).unwrap();
        assert!(r.passed);
        assert_eq!(r.worst_slack, 3f64.ln());
        let w = r.witness.unwrap();
        assert_eq!((w.x.as_str(), w.y.as_str()), ("0", "3"));

        let r = check_sandwich(&s, &Gauge::log(0.0).unwrap(), &dm).unwrap();
        assert!(!r.passed && r.lower_ok);

        let s = gen_exp(2).unwrap();
        let dm = derive_metric(&s);
        let r = check_sandwich(&s, &Gauge::neg_reciprocal(1.0).unwrap(), &dm).unwrap();
        assert!(r.passed);
        assert_relative_eq!(
            r.worst_slack,
            1.0 / (2.0 * E) - 1.0 / (E * E),
            max_relative = 1e-12
        );
        assert_relative_eq!(r.worst_slack, 0.0486, epsilon = 1e-4);
    }

    #[test]
    fn slack_matches_min_alpha() {
        let s = gen_hybrid(9).unwrap();
        let log = Gauge::log(0.0).unwrap();
        let r = check_sandwich(&s, &log, &derive_metric(&s)).unwrap();
        assert_eq!(r.worst_slack, min_alpha(&s, &log).unwrap().alpha);
    }

    #[test]
    fn reverse_direction_examples() {
        let s = gen_hybrid(5).unwrap();
        let dm = derive_metric(&s);
        let r = boundedness_implies_d3(&s, &Gauge::log(3f64.ln()).unwrap(), &dm.d).unwrap();
        assert!(r.passed);

        let m = line(&[0.0, 1.0, 2.5]);
        let r = boundedness_implies_d3(&m, &Gauge::log(0.0).unwrap(), m.matrix()).unwrap();
        assert!(r.passed);

        let s = gen_exp(4).unwrap();
        let dm = derive_metric(&s);
        let r = boundedness_implies_d3(&s, &Gauge::neg_reciprocal(1.0).unwrap(), &dm.d).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn reverse_direction_preconditions() {
        let s = gen_hybrid(5).unwrap();
        // D itself is not a metric here.
        let err = boundedness_implies_d3(&s, &Gauge::log(5.0).unwrap(), s.matrix()).unwrap_err();
        assert!(matches!(err, Error::MetricAxiom(_)));

        let dm = derive_metric(&s);
        let err = boundedness_implies_d3(&s, &Gauge::log(0.5).unwrap(), &dm.d).unwrap_err();
        assert!(matches!(err, Error::Sandwich { .. }));
    }

    #[test]
    fn idempotent_on_derived() {
        let dm = derive_metric(&gen_exp(5).unwrap());
        assert_eq!(derive_metric(&dm.to_space()).d, dm.d);
    }

    #[test]
    fn csv_export() {
        let dm = derive_metric(&gen_hybrid(4).unwrap());
        let back = crate::space::parse_csv(&dm.to_csv()).unwrap();
        assert_eq!(back.matrix(), &dm.d);
    }
}
