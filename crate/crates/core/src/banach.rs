//! Contraction mappings on F-metric spaces.
//!
//! For a contraction `g` with constant `k < 1`, the chain of consecutive
//! iterates from `x_n` onward sums to at most `k^n / (1 - k) * D(x_0, x_1)`.
//! Once that bound drops below `delta(eps)` from the gauge, the generalized
//! triangle inequality forces every later pair of iterates within `eps` of
//! each other. The solver stops on exactly that certificate.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::{Gauge, ToleranceQuery, DEFAULT_BUDGET};
use crate::space::FiniteSpace;
use crate::GAUGE_SLACK;

/// Relative slack in the per-step decay check.
pub const DECAY_SLACK: f64 = 1e-12;

/// A point set with a distance, as seen by the solver.
pub trait Domain {
    type Point: Clone + PartialEq + fmt::Debug + Serialize;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    fn contains(&self, p: &Self::Point) -> bool;

    /// Declared points: every point for finite sets, a sample grid otherwise.
    fn declared_points(&self) -> Vec<Self::Point>;

    /// Whether [`Domain::declared_points`] is the whole domain.
    fn is_exhaustive(&self) -> bool;
}

impl Domain for FiniteSpace {
    type Point = usize;

    fn distance(&self, a: &usize, b: &usize) -> f64 {
        self.d(*a, *b)
    }

    fn contains(&self, p: &usize) -> bool {
        *p < self.len()
    }

    fn declared_points(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    fn is_exhaustive(&self) -> bool {
        true
    }
}

type RealDistance = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Real numbers (optionally restricted to an interval) with a declared
/// distance and a sample grid.
pub struct RealLine {
    distance: RealDistance,
    bounds: Option<(f64, f64)>,
    grid: Vec<f64>,
}

impl RealLine {
    pub fn new(distance: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, grid: Vec<f64>) -> Self {
        RealLine {
            distance: Box::new(distance),
            bounds: None,
            grid,
        }
    }

    /// `|x - y|` on the given grid.
    pub fn usual(grid: Vec<f64>) -> Self {
        RealLine::new(|x, y| (x - y).abs(), grid)
    }

    /// Restricts the domain to `[lo, hi]`.
    pub fn bounded(mut self, lo: f64, hi: f64) -> Self {
        self.bounds = Some((lo, hi));
        self
    }

    /// `count` evenly spaced points on `[lo, hi]`.
    pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect(),
        }
    }
}

impl fmt::Debug for RealLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealLine")
            .field("bounds", &self.bounds)
            .field("grid_len", &self.grid.len())
            .finish()
    }
}

impl Domain for RealLine {
    type Point = f64;

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        if a == b {
            0.0
        } else {
            (self.distance)(*a, *b)
        }
    }

    fn contains(&self, p: &f64) -> bool {
        p.is_finite() && self.bounds.is_none_or(|(lo, hi)| (lo..=hi).contains(p))
    }

    fn declared_points(&self) -> Vec<f64> {
        self.grid.clone()
    }

    fn is_exhaustive(&self) -> bool {
        false
    }
}

type SelfMap<'a, P> = Box<dyn Fn(&P) -> P + 'a>;

/// A self-map on a domain together with the gauge certifying its space.
pub struct ContractionProblem<'a, D: Domain> {
    pub domain: &'a D,
    pub map: SelfMap<'a, D::Point>,
    /// Supplied contraction constant; estimated from the declared points
    /// when absent.
    pub k: Option<f64>,
    pub gauge: Gauge,
}

impl<'a, D: Domain> ContractionProblem<'a, D> {
    pub fn new(domain: &'a D, map: impl Fn(&D::Point) -> D::Point + 'a, gauge: Gauge) -> Self {
        ContractionProblem {
            domain,
            map: Box::new(map),
            k: None,
            gauge,
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn apply(&self, p: &D::Point) -> D::Point {
        (self.map)(p)
    }

    /// The supplied constant, or an estimate from the declared points.
    pub fn contraction_constant(&self) -> Result<KEstimate> {
        match self.k {
            Some(k) => Ok(KEstimate {
                k,
                contraction: k < 1.0,
                source: KSource::Supplied,
                pairs: 0,
            }),
            None => estimate_k(self),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KSource {
    Supplied,
    /// Exhaustive over a finite point set.
    Exhaustive,
    /// Sampled on a declared grid; a lower bound on the true constant.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KEstimate {
    pub k: f64,
    pub contraction: bool,
    pub source: KSource,
    pub pairs: usize,
}

/// `sup D(g(x), g(y)) / D(x, y)` over declared pairs with `D(x, y) > 0`.
pub fn estimate_k<D: Domain>(p: &ContractionProblem<'_, D>) -> Result<KEstimate> {
    let points = p.domain.declared_points();
    if points.is_empty() {
        return Err(Error::Argument(
            "no declared points to estimate k on".into(),
        ));
    }
    let images: Vec<D::Point> = points.iter().map(|x| p.apply(x)).collect();
    let mut k = 0.0f64;
    let mut pairs = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = p.domain.distance(&points[i], &points[j]);
            if d > 0.0 {
                pairs += 1;
                k = k.max(p.domain.distance(&images[i], &images[j]) / d);
            }
        }
    }
    Ok(KEstimate {
        k,
        contraction: k < 1.0,
        source: if p.domain.is_exhaustive() {
            KSource::Exhaustive
        } else {
            KSource::Sampled
        },
        pairs,
    })
}

fn tail_bound(k: f64, n: u64, d0: f64) -> f64 {
    let power = if n > i32::MAX as u64 {
        0.0
    } else {
        k.powi(n as i32)
    };
    power / (1.0 - k) * d0
}

/// Smallest `N` with `k^N / (1 - k) * d0 < delta`; 0 when `d0 = 0`.
pub fn certified_steps(k: f64, d0: f64, delta: f64) -> Result<u64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Argument(format!(
            "contraction constant must lie in [0, 1), got {k}"
        )));
    }
    if !(d0 >= 0.0 && d0.is_finite()) {
        return Err(Error::Argument(format!(
            "initial step must be finite and nonnegative, got {d0}"
        )));
    }
    if d0 == 0.0 {
        return Ok(0);
    }
    if k == 0.0 {
        return Ok(if d0 < delta { 0 } else { 1 });
    }
    // Closed-form guess, then correct for rounding.
    let guess = ((delta * (1.0 - k) / d0).ln() / k.ln()).floor();
    let mut n = if guess.is_finite() && guess > 0.0 {
        guess as u64
    } else {
        0
    };
    while n > 0 && tail_bound(k, n - 1, d0) < delta {
        n -= 1;
    }
    while !(tail_bound(k, n, d0) < delta) {
        n += 1;
    }
    Ok(n)
}

/// A-priori iteration count after which all iterates are pairwise within
/// `eps`, for initial step `d0 = D(x_0, g(x_0))`.
pub fn iteration_bound(gauge: &Gauge, k: f64, d0: f64, eps: f64) -> Result<u64> {
    if d0 == 0.0 {
        return Ok(0);
    }
    let q = gauge.delta_for_epsilon(eps, DEFAULT_BUDGET)?;
    certified_steps(k, d0, q.delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport<P> {
    pub x_star: P,
    pub iterations: u64,
    /// `D(x*, g(x*))`.
    pub residual: f64,
    pub bound_n: u64,
    pub epsilon: f64,
    pub resolved: ToleranceQuery,
    pub k: KEstimate,
    /// Steps whose ratio to the previous step exceeded `k`.
    pub decay_violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<P>>,
}

/// Iterates `x_{n+1} = g(x_n)` until the certified tail bound
/// `D(x_n, x_{n+1}) / (1 - k)` drops below `delta(eps)`, or the a-priori
/// count is reached.
pub fn solve_fixed_point<D: Domain>(
    p: &ContractionProblem<'_, D>,
    x0: D::Point,
    eps: f64,
    options: SolveOptions,
) -> Result<FixedPointReport<D::Point>> {
    if !(eps > 0.0) {
        return Err(Error::Argument(format!(
            "epsilon must be positive, got {eps}"
        )));
    }
    if !p.domain.contains(&x0) {
        return Err(Error::OutsideDomain { step: 0 });
    }
    let resolved = p.gauge.delta_for_epsilon(eps, DEFAULT_BUDGET)?;
    let k = p.contraction_constant()?;
    if !k.contraction {
        return Err(Error::NotContraction {
            ratio: k.k,
            step: 0,
        });
    }

    let mut trace = options.trace.then(|| vec![x0.clone()]);
    let mut x = x0;
    let mut next = p.apply(&x);
    if !p.domain.contains(&next) {
        return Err(Error::OutsideDomain { step: 1 });
    }
    let d0 = p.domain.distance(&x, &next);
    let bound_n = certified_steps(k.k, d0, resolved.delta)?;

    let mut step = d0;
    let mut n = 0u64;
    let mut decay_violations = 0;
    while n < bound_n && !(step / (1.0 - k.k) < resolved.delta) {
        x = next;
        if let Some(t) = trace.as_mut() {
            t.push(x.clone());
        }
        next = p.apply(&x);
        n += 1;
        if !p.domain.contains(&next) {
            return Err(Error::OutsideDomain {
                step: n as usize + 1,
            });
        }
        let new_step = p.domain.distance(&x, &next);
        if step > 0.0 {
            let ratio = new_step / step;
            if ratio >= 1.0 {
                return Err(Error::NotContraction {
                    ratio,
                    step: n as usize,
                });
            }
            if ratio > k.k * (1.0 + DECAY_SLACK) {
                decay_violations += 1;
            }
        }
        step = new_step;
    }

    Ok(FixedPointReport {
        residual: step,
        x_star: x,
        iterations: n,
        bound_n,
        epsilon: eps,
        resolved,
        k,
        decay_violations,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessVerdict<P> {
    pub passed: bool,
    pub distance: f64,
    pub first: FixedPointReport<P>,
    pub second: FixedPointReport<P>,
}

/// Solves from two starts and checks the fixed points agree within `2 eps`.
pub fn check_uniqueness<D: Domain>(
    p: &ContractionProblem<'_, D>,
    start_a: D::Point,
    start_b: D::Point,
    eps: f64,
) -> Result<UniquenessVerdict<D::Point>> {
    let first = solve_fixed_point(p, start_a, eps, SolveOptions::default())?;
    let second = solve_fixed_point(p, start_b, eps, SolveOptions::default())?;
    let distance = p.domain.distance(&first.x_star, &second.x_star);
    Ok(UniquenessVerdict {
        passed: distance <= 2.0 * eps,
        distance,
        first,
        second,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallInvariance {
    /// Smallest grid radius satisfying `f(k eps + d0) <= f(eps) - alpha`.
    pub epsilon: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub k: KEstimate,
    pub d0: f64,
    /// Whether every declared point of the closed ball maps into it.
    pub invariant: bool,
    pub points_checked: usize,
    pub escapes: usize,
}

/// Finds the smallest `eps` in the grid with
/// `f(k eps + D(x0, g(x0))) <= f(eps) - alpha`, then checks empirically that
/// `g` maps the declared points of the closed ball `B[x0, eps]` into it.
pub fn local_ball_invariance<D: Domain>(
    p: &ContractionProblem<'_, D>,
    x0: D::Point,
    r: f64,
    eps_grid: &[f64],
) -> Result<Option<BallInvariance>> {
    if let Some(&bad) = eps_grid.iter().find(|&&e| !(e > 0.0 && e < r)) {
        return Err(Error::Argument(format!(
            "grid radius {bad} is not in (0, {r})"
        )));
    }
    let k = p.contraction_constant()?;
    let d0 = p.domain.distance(&x0, &p.apply(&x0));
    let mut grid = eps_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    for eps in grid {
        let lhs = p.gauge.eval(k.k * eps + d0)?;
        let rhs = p.gauge.eval(eps)? - p.gauge.alpha();
        if lhs <= rhs + GAUGE_SLACK {
            let ball: Vec<D::Point> = p
                .domain
                .declared_points()
                .into_iter()
                .filter(|x| p.domain.distance(&x0, x) <= eps)
                .collect();
            let escapes = ball
                .iter()
                .filter(|x| p.domain.distance(&x0, &p.apply(x)) > eps * (1.0 + DECAY_SLACK))
                .count();
            return Ok(Some(BallInvariance {
                epsilon: eps,
                lhs,
                rhs,
                k,
                d0,
                invariant: escapes == 0,
                points_checked: ball.len(),
                escapes,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::gen_exp;

    fn log0() -> Gauge {
        Gauge::log(0.0).unwrap()
    }

    fn grid32() -> Vec<f64> {
        (0..=32).map(|i| i as f64 / 32.0).collect()
    }

    #[test]
    fn estimate_k_examples() {
        let line = RealLine::usual(grid32());
        let constant = ContractionProblem::new(&line, |_: &f64| 0.25, log0());
        assert_eq!(estimate_k(&constant).unwrap().k, 0.0);

        let half = ContractionProblem::new(&line, |x: &f64| x / 2.0, log0());
        let k = estimate_k(&half).unwrap();
        assert_eq!(k.k, 0.5);
        assert!(k.contraction);
        assert_eq!(k.source, KSource::Sampled);

        let identity = ContractionProblem::new(&line, |x: &f64| *x, log0());
        let k = estimate_k(&identity).unwrap();
        assert_eq!(k.k, 1.0);
        assert!(!k.contraction);

        let empty = RealLine::usual(vec![]);
        let p = ContractionProblem::new(&empty, |x: &f64| *x, log0());
        assert!(matches!(estimate_k(&p), Err(Error::Argument(_))));
    }

    #[test]
    fn estimate_k_finite_is_exhaustive() {
        let s = gen_exp(3).unwrap();
        let p = ContractionProblem::new(&s, |_: &usize| 2, log0());
        let k = estimate_k(&p).unwrap();
        assert_eq!((k.k, k.source), (0.0, KSource::Exhaustive));
    }

    #[test]
    fn iteration_bound_examples() {
        assert_eq!(iteration_bound(&log0(), 0.5, 1.0, 1e-6).unwrap(), 21);
        let g = Gauge::log(3f64.ln()).unwrap();
        assert_eq!(iteration_bound(&g, 0.5, 1.0, 3e-6).unwrap(), 21);
        assert_eq!(iteration_bound(&g, 0.5, 0.0, 1e-6).unwrap(), 0);
    }

    #[test]
    fn certified_steps_is_minimal() {
        for &(k, d0, delta) in &[
            (0.5, 1.0, 1e-6),
            (0.9, 3.0, 1e-3),
            (0.1, 1e3, 1e-9),
            (0.0, 2.0, 1.0),
        ] {
            let n = certified_steps(k, d0, delta).unwrap();
            assert!(tail_bound(k, n, d0) < delta);
            if n > 0 {
                assert!(!(tail_bound(k, n - 1, d0) < delta));
            }
        }
        assert!(certified_steps(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn affine_map_converges_to_two() {
        let line = RealLine::usual(RealLine::linspace(-20.0, 20.0, 81));
        let p = ContractionProblem::new(&line, |x: &f64| 0.5 * x + 1.0, log0());
        for x0 in [0.0, 10.0] {
            let r = solve_fixed_point(&p, x0, 1e-8, SolveOptions::default()).unwrap();
            assert!((r.x_star - 2.0).abs() <= 1e-8, "{r:?}");
            assert!(r.residual <= 1e-8);
            assert!(r.iterations <= r.bound_n);
        }
    }

    #[test]
    fn constant_map_one_iteration() {
        let line = RealLine::usual(grid32());
        let p = ContractionProblem::new(&line, |_: &f64| 0.75, log0());
        let r = solve_fixed_point(&p, 0.0, 1e-6, SolveOptions { trace: true }).unwrap();
        assert_eq!(r.x_star, 0.75);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.trace.unwrap(), vec![0.0, 0.75]);
    }

    #[test]
    fn halving_map_within_bound() {
        let line = RealLine::usual(grid32());
        let p = ContractionProblem::new(&line, |x: &f64| x / 2.0, log0());
        let r = solve_fixed_point(&p, 1.0, 1e-6, SolveOptions::default()).unwrap();
        assert!(r.x_star.abs() <= 1e-6);
        assert!(r.iterations <= 21);
        assert!(r.residual <= 1e-6);
    }

    #[test]
    fn fixed_start_short_circuits() {
        let line = RealLine::usual(grid32());
        let p = ContractionProblem::new(&line, |x: &f64| 0.5 * x + 1.0, log0());
        let r = solve_fixed_point(&p, 2.0, 1e-8, SolveOptions::default()).unwrap();
        assert_eq!((r.x_star, r.iterations, r.bound_n), (2.0, 0, 0));
    }

    #[test]
    fn detects_expansion() {
        let line = RealLine::usual(grid32());
        // Sampled k is small on the grid, but iterates expand away from it.
        let p = ContractionProblem::new(
            &line,
            |x: &f64| if *x > 1.0 { 3.0 * x } else { x / 2.0 + 1.5 },
            log0(),
        )
        .with_k(0.5);
        assert!(matches!(
            solve_fixed_point(&p, 1.0, 1e-6, SolveOptions::default()),
            Err(Error::NotContraction { .. })
        ));

        let p = ContractionProblem::new(&line, |x: &f64| *x + 1.0, log0());
        assert!(matches!(
            solve_fixed_point(&p, 0.0, 1e-6, SolveOptions::default()),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn detects_domain_escape() {
        let line = RealLine::usual(grid32()).bounded(0.0, 1.0);
        let p = ContractionProblem::new(&line, |x: &f64| 0.5 * x + 1.0, log0()).with_k(0.5);
        assert!(matches!(
            solve_fixed_point(&p, 0.0, 1e-6, SolveOptions::default()),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn finite_space_solve() {
        let s = gen_exp(3).unwrap();
        let targets = [1usize, 1, 1, 2];
        let p = ContractionProblem::new(&s, move |x: &usize| targets[*x], log0()).with_k(0.5);
        let r = solve_fixed_point(&p, 3, 1e-6, SolveOptions::default());
        // 3 -> 2 -> 1 -> 1: steps e then e, ratio 1 is not a contraction.
        assert!(matches!(r, Err(Error::NotContraction { .. })));

        let targets = [1usize, 1, 1, 1];
        let p = ContractionProblem::new(&s, move |x: &usize| targets[*x], log0());
        let r = solve_fixed_point(&p, 3, 1e-6, SolveOptions::default()).unwrap();
        assert_eq!(r.x_star, 1);
    }

    #[test]
    fn uniqueness_examples() {
        let line = RealLine::usual(RealLine::linspace(-20.0, 20.0, 81));
        let p = ContractionProblem::new(&line, |x: &f64| 0.5 * x + 1.0, log0());
        assert!(check_uniqueness(&p, 0.0, 10.0, 1e-8).unwrap().passed);

        let p = ContractionProblem::new(&line, |_: &f64| -3.0, log0());
        let v = check_uniqueness(&p, 5.0, -7.0, 1e-8).unwrap();
        assert!(v.passed);
        assert_eq!(v.distance, 0.0);

        let p = ContractionProblem::new(&line, |x: &f64| x / 2.0, log0());
        let v = check_uniqueness(&p, 1.0, -1.0, 1e-6).unwrap();
        assert!(v.passed);
        assert!(v.first.x_star.abs() <= 1e-6 && v.second.x_star.abs() <= 1e-6);
    }

    #[test]
    fn ball_invariance_examples() {
        let line = RealLine::usual(RealLine::linspace(-10.0, 10.0, 201));
        let p = ContractionProblem::new(&line, |x: &f64| 0.5 * x + 1.0, log0()).with_k(0.5);

        let found = local_ball_invariance(&p, 2.0, 10.0, &[0.5, 1.0, 4.0])
            .unwrap()
            .unwrap();
        assert_eq!(found.epsilon, 0.5);
        assert!(found.invariant);

        let found = local_ball_invariance(&p, 0.0, 10.0, &[1.0, 1.5, 2.0, 3.0])
            .unwrap()
            .unwrap();
        assert_eq!(found.epsilon, 2.0);
        assert!(found.invariant);
        assert!(found.points_checked > 0);

        assert!(local_ball_invariance(&p, 0.0, 10.0, &[0.5, 1.0, 1.9])
            .unwrap()
            .is_none());
        assert!(local_ball_invariance(&p, 0.0, 1.0, &[0.5, 1.0]).is_err());
    }
}
