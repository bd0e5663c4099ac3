use std::cmp::Ordering;

use serde::Serialize;

use super::{shortest_chain_infimum, DistanceMatrix, FiniteSpace};
use crate::error::Result;
use crate::gauge::Gauge;
use crate::report::{ext_real, ext_real_opt};
use crate::GAUGE_SLACK;

/// Relative slack for deciding that a constant equals 1.
const UNIT_SLACK: f64 = 1e-12;

/// Identity and symmetry violations of a candidate distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomFragment {
    pub d1_ok: bool,
    pub d2_ok: bool,
    /// Nonzero diagonal entries and zero off-diagonal entries.
    pub d1_violations: Vec<(String, String)>,
    /// Pairs `(x, y)`, `x` before `y`, with `D(x, y) != D(y, x)`.
    pub d2_violations: Vec<(String, String)>,
}

impl AxiomFragment {
    pub fn passed(&self) -> bool {
        self.d1_ok && self.d2_ok
    }
}

pub fn check_d1_d2(space: &FiniteSpace) -> AxiomFragment {
    let n = space.len();
    let name = |i: usize, j: usize| (space.label(i).to_string(), space.label(j).to_string());
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = space.d(i, j);
            if (i == j) != (v == 0.0) {
                d1.push(name(i, j));
            }
            if i < j && v != space.d(j, i) {
                d2.push(name(i, j));
            }
        }
    }
    AxiomFragment {
        d1_ok: d1.is_empty(),
        d2_ok: d2.is_empty(),
        d1_violations: d1,
        d2_violations: d2,
    }
}

/// Gauge gap `f(D(x, y)) - f(d(x, y))` at one pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairExcess {
    pub x: String,
    pub y: String,
    pub direct: f64,
    pub chain: f64,
    pub f_direct: f64,
    pub f_chain: f64,
    pub excess: f64,
}

/// Scans all ordered pairs with `D(x, y) > 0` and returns the one
/// maximizing `f(D) - f(reference)`; ties go to the lexicographically
/// smaller label pair.
pub(crate) fn worst_excess(
    space: &FiniteSpace,
    reference: &DistanceMatrix,
    gauge: &Gauge,
) -> Result<Option<PairExcess>> {
    let n = space.len();
    let mut worst: Option<PairExcess> = None;
    for i in 0..n {
        for j in 0..n {
            let direct = space.d(i, j);
            if i == j || direct <= 0.0 {
                continue;
            }
            let chain = reference.get(i, j);
            let f_direct = gauge.eval(direct)?;
            let f_chain = gauge.eval(chain)?;
            let excess = f_direct - f_chain;
            let better = match &worst {
                None => true,
                Some(w) => match excess.partial_cmp(&w.excess) {
                    Some(Ordering::Greater) => true,
                    Some(Ordering::Equal) => {
                        (space.label(i), space.label(j)) < (w.x.as_str(), w.y.as_str())
                    }
                    _ => false,
                },
            };
            if better {
                worst = Some(PairExcess {
                    x: space.label(i).to_string(),
                    y: space.label(j).to_string(),
                    direct,
                    chain,
                    f_direct,
                    f_chain,
                    excess,
                });
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct D3Report {
    pub passed: bool,
    pub gauge: Gauge,
    /// Pair maximizing `f(D) - f(d_sp)`; absent on spaces with fewer than
    /// two points.
    pub worst: Option<PairExcess>,
}

/// Verifies the generalized triangle inequality.
///
/// Because `f` is non-decreasing, the binding chain for a pair is the one
/// with the smallest sum, so it suffices to check
/// `f(D(x, y)) <= f(d_sp(x, y)) + alpha` for every pair with `D(x, y) > 0`.
pub fn check_d3(space: &FiniteSpace, gauge: &Gauge) -> Result<D3Report> {
    let chains = shortest_chain_infimum(space);
    d3_against(space, &chains, gauge)
}

pub(crate) fn d3_against(
    space: &FiniteSpace,
    chains: &DistanceMatrix,
    gauge: &Gauge,
) -> Result<D3Report> {
    let worst = worst_excess(space, chains, gauge)?;
    let passed = worst
        .as_ref()
        .is_none_or(|w| w.excess <= gauge.alpha() + GAUGE_SLACK);
    Ok(D3Report {
        passed,
        gauge: gauge.clone(),
        worst,
    })
}

/// Smallest shift making `(f, alpha)` witness the generalized triangle
/// inequality on this space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub alpha: f64,
    pub witness: Option<(String, String)>,
}

/// `max f(D(x, y)) - f(d_sp(x, y))` over pairs; the shift of `gauge` is
/// ignored.
pub fn min_alpha(space: &FiniteSpace, gauge: &Gauge) -> Result<AlphaEstimate> {
    let chains = shortest_chain_infimum(space);
    min_alpha_against(space, &chains, gauge)
}

pub(crate) fn min_alpha_against(
    space: &FiniteSpace,
    chains: &DistanceMatrix,
    gauge: &Gauge,
) -> Result<AlphaEstimate> {
    Ok(match worst_excess(space, chains, gauge)? {
        Some(w) => AlphaEstimate {
            alpha: w.excess.max(0.0),
            witness: Some((w.x, w.y)),
        },
        None => AlphaEstimate {
            alpha: 0.0,
            witness: None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub d1_ok: bool,
    pub d2_ok: bool,
    pub d1_violations: Vec<(String, String)>,
    pub d2_violations: Vec<(String, String)>,
    /// Smallest shift for `f = ln`; absent when the identity axiom fails.
    #[serde(serialize_with = "ext_real_opt")]
    pub min_alpha: Option<f64>,
    pub alpha_witness: Option<(String, String)>,
    /// Smallest `K` with `D(x, y) <= K * (chain sum)` for all chains.
    #[serde(serialize_with = "ext_real")]
    pub min_k_relaxed: f64,
    pub relaxed_witness: Option<(String, String)>,
    /// Smallest `K >= 1` with `D(x, y) <= K * (D(x, z) + D(z, y))`.
    #[serde(serialize_with = "ext_real")]
    pub min_k_b: f64,
    pub b_witness: Option<(String, String, String)>,
    /// Both constants equal 1.
    pub metric: bool,
}

pub fn classify(space: &FiniteSpace) -> ClassificationReport {
    let axioms = check_d1_d2(space);
    let chains = shortest_chain_infimum(space);
    let n = space.len();
    let name = |i: usize| space.label(i).to_string();

    let mut k_relaxed = 1.0;
    let mut relaxed_witness = None;
    for i in 0..n {
        for j in 0..n {
            let direct = space.d(i, j);
            if i == j || direct <= 0.0 {
                continue;
            }
            let ratio = direct / chains.get(i, j);
            if ratio > k_relaxed {
                k_relaxed = ratio;
                relaxed_witness = Some((name(i), name(j)));
            }
        }
    }

    // Column j of D as a row, so the z scan walks two contiguous slices.
    let by_col = DistanceMatrix::from_fn(n, |j, z| space.d(z, j));
    let mut k_b = 1.0;
    let mut b_witness = None;
    for i in 0..n {
        let from_i = space.matrix().row(i);
        for j in 0..n {
            let direct = space.d(i, j);
            if i == j || direct <= 0.0 {
                continue;
            }
            let into_j = by_col.row(j);
            for z in 0..n {
                if z == i || z == j {
                    continue;
                }
                let ratio = direct / (from_i[z] + into_j[z]);
                if ratio > k_b {
                    k_b = ratio;
                    b_witness = Some((name(i), name(j), name(z)));
                }
            }
        }
    }

    let (min_alpha, alpha_witness) = if axioms.d1_ok {
        let log = Gauge::log(0.0).expect("valid gauge");
        match min_alpha_against(space, &chains, &log) {
            Ok(a) => (Some(a.alpha), a.witness),
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };

    let unit = |k: f64| k <= 1.0 + UNIT_SLACK;
    ClassificationReport {
        d1_ok: axioms.d1_ok,
        d2_ok: axioms.d2_ok,
        d1_violations: axioms.d1_violations,
        d2_violations: axioms.d2_violations,
        min_alpha,
        alpha_witness,
        metric: unit(k_relaxed) && unit(k_b),
        min_k_relaxed: k_relaxed,
        relaxed_witness,
        min_k_b: k_b,
        b_witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{gen_exp, gen_hybrid, gen_square_grid};
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn ln3() -> f64 {
        3f64.ln()
    }

    fn pair(x: &str, y: &str) -> Option<(String, String)> {
        Some((x.to_string(), y.to_string()))
    }

    fn line(points: &[f64]) -> FiniteSpace {
        FiniteSpace::from_matrix(DistanceMatrix::from_fn(points.len(), |i, j| {
            (points[i] - points[j]).abs()
        }))
    }

    #[test]
    fn d1_d2_examples() {
        assert!(check_d1_d2(&gen_exp(3).unwrap()).passed());

        let s = FiniteSpace::from_matrix(
            DistanceMatrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap(),
        );
        let r = check_d1_d2(&s);
        assert!(!r.d1_ok && r.d2_ok);
        assert!(r.d1_violations.contains(&("0".into(), "1".into())));

        let s = FiniteSpace::from_matrix(
            DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap(),
        );
        let r = check_d1_d2(&s);
        assert!(r.d1_ok && !r.d2_ok);
        assert_eq!(r.d2_violations, vec![("0".into(), "1".into())]);
    }

    #[test]
    fn d3_examples() {
        let hybrid = gen_hybrid(5).unwrap();
        assert!(
            check_d3(&hybrid, &Gauge::log(ln3()).unwrap())
                .unwrap()
                .passed
        );

        let exp = gen_exp(4).unwrap();
        assert!(
            check_d3(&exp, &Gauge::neg_reciprocal(1.0).unwrap())
                .unwrap()
                .passed
        );

        let r = check_d3(&hybrid, &Gauge::log(0.0).unwrap()).unwrap();
        assert!(!r.passed);
        let w = r.worst.unwrap();
        assert_eq!((w.x.as_str(), w.y.as_str()), ("0", "3"));
        assert_eq!((w.direct, w.chain), (9.0, 3.0));
    }

    #[test]
    fn min_alpha_examples() {
        let a = min_alpha(&gen_hybrid(5).unwrap(), &Gauge::log(0.0).unwrap()).unwrap();
        assert_eq!(a.alpha, ln3());
        assert_eq!(a.witness, pair("0", "3"));

        let a = min_alpha(&gen_square_grid(10).unwrap(), &Gauge::log(0.0).unwrap()).unwrap();
        assert_relative_eq!(a.alpha, 10f64.ln(), max_relative = 1e-12);
        assert_eq!(a.witness, pair("0", "1"));

        let a = min_alpha(&line(&[0.0, 1.0, 3.0, 7.0]), &Gauge::log(0.0).unwrap()).unwrap();
        assert_eq!(a.alpha, 0.0);
    }

    #[test]
    fn min_alpha_ignores_shift() {
        let s = gen_hybrid(5).unwrap();
        let a = min_alpha(&s, &Gauge::log(7.0).unwrap()).unwrap();
        assert_eq!(a.alpha, ln3());
    }

    #[test]
    fn classify_examples() {
        let r = classify(&gen_hybrid(5).unwrap());
        assert_eq!(r.min_k_relaxed, 3.0);
        assert_eq!(r.relaxed_witness, pair("0", "3"));
        assert!(!r.metric);

        let r = classify(&gen_square_grid(2).unwrap());
        assert!(r.min_k_b <= 2.0);
        assert_eq!(r.min_k_b, 2.0);

        let r = classify(&gen_exp(4).unwrap());
        assert_relative_eq!(r.min_k_relaxed, E.powi(3) / 4.0, max_relative = 1e-14);
        assert_relative_eq!(r.min_k_relaxed, 5.0214, epsilon = 1e-4);
    }

    #[test]
    fn classify_metric_space() {
        let r = classify(&line(&[0.0, 1.0, 3.0, 7.0]));
        assert!(r.metric);
        assert_eq!(r.min_alpha, Some(0.0));
    }

    #[test]
    fn classify_flags_identity_failure() {
        let s = FiniteSpace::from_matrix(
            DistanceMatrix::from_rows(vec![
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ])
            .unwrap(),
        );
        let r = classify(&s);
        assert!(!r.d1_ok);
        assert_eq!(r.min_alpha, None);
    }
}
