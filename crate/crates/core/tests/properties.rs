mod common;

use fmetric::banach::{self, ContractionProblem, RealLine, SolveOptions};
use fmetric::derive::{check_sandwich, derive_metric};
use fmetric::gauge::DEFAULT_BUDGET;
use fmetric::sequences::{self, SeqPoint, SequenceSample};
use fmetric::space::{self, classify, gen_exp, gen_hybrid, gen_square_grid, min_alpha};
use fmetric::topology::{self, Ball, SubsetMask};
use fmetric::{DistanceMatrix, FiniteSpace, Gauge, Point};
use proptest::prelude::*;

fn builtin_gauge() -> impl Strategy<Value = Gauge> {
    (any::<bool>(), 0.0..3.0f64).prop_map(|(log, alpha)| {
        if log {
            Gauge::log(alpha).unwrap()
        } else {
            Gauge::neg_reciprocal(alpha).unwrap()
        }
    })
}

/// Symmetric zero-diagonal space, weights in (0, 10].
fn space_strategy(max_points: usize) -> impl Strategy<Value = FiniteSpace> {
    (2..=max_points).prop_flat_map(|n| {
        prop::collection::vec(1e-3..=10.0f64, n * (n - 1) / 2).prop_map(move |w| {
            let mut it = w.into_iter();
            common::random_space(n, || it.next().unwrap())
        })
    })
}

fn dyadic_space_strategy(max_points: usize) -> impl Strategy<Value = FiniteSpace> {
    (2..=max_points).prop_flat_map(|n| {
        prop::collection::vec(1..=10_240u32, n * (n - 1) / 2).prop_map(move |w| {
            let mut it = w.into_iter();
            common::random_space(n, || it.next().unwrap() as f64 / 1024.0)
        })
    })
}

fn generated_spaces() -> Vec<FiniteSpace> {
    let mut out = Vec::new();
    for n in 4..=9 {
        out.push(gen_hybrid(n).unwrap());
    }
    for n in 1..=9 {
        out.push(gen_exp(n).unwrap());
    }
    for n in 2..=9 {
        out.push(gen_square_grid(n).unwrap());
    }
    out
}

proptest! {
    #[test]
    fn builtin_gauges_are_monotone(g in builtin_gauge(), mut grid in prop::collection::vec(1e-6..1e6f64, 1..40)) {
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        prop_assert!(g.check_f1(&grid).unwrap().passed);
    }

    #[test]
    fn resolver_is_sound(g in builtin_gauge(), eps in 1e-6..1e3f64) {
        let q = g.delta_for_epsilon(eps, DEFAULT_BUDGET).unwrap();
        prop_assert!(q.delta > 0.0 && q.delta <= eps);
        let shrunk = g.eval(q.delta * (1.0 - q.margin)).unwrap();
        prop_assert!(shrunk < g.eval(eps).unwrap() - g.alpha());
    }

    #[test]
    fn resolver_matches_analytic_inverse(alpha in 0.0..3.0f64, eps in 1e-6..1e3f64) {
        let log = Gauge::log(alpha).unwrap();
        let q = log.delta_for_epsilon(eps, DEFAULT_BUDGET).unwrap();
        prop_assert!((q.delta - eps * (-alpha).exp()).abs() <= q.margin * eps);

        let nr = Gauge::neg_reciprocal(alpha).unwrap();
        let q = nr.delta_for_epsilon(eps, DEFAULT_BUDGET).unwrap();
        prop_assert!((q.delta - eps / (1.0 + alpha * eps)).abs() <= q.margin * eps);
    }

    #[test]
    fn chain_infimum_matches_brute_force_exactly(s in dyadic_space_strategy(6)) {
        let fast = space::shortest_chain_infimum(&s);
        prop_assert_eq!(fast, common::brute_force_all(s.matrix()));
    }

    #[test]
    fn chain_infimum_dominated_and_positive(s in space_strategy(8)) {
        let d = space::shortest_chain_infimum(&s);
        for i in 0..s.len() {
            for j in 0..s.len() {
                prop_assert!(d.get(i, j) <= s.d(i, j));
                prop_assert_eq!(d.get(i, j) > 0.0, i != j);
            }
        }
    }

    #[test]
    fn log_alpha_is_log_of_relaxed_constant(s in space_strategy(8)) {
        let alpha = min_alpha(&s, &Gauge::log(0.0).unwrap()).unwrap().alpha;
        let k = classify(&s).min_k_relaxed;
        prop_assert!((alpha.exp() - k).abs() <= 1e-12 * k);
    }

    #[test]
    fn b_constant_below_relaxed_constant(s in space_strategy(8)) {
        let r = classify(&s);
        prop_assert!(r.min_k_b <= r.min_k_relaxed);
        prop_assert!(r.min_k_b >= 1.0 && r.min_k_relaxed >= 1.0);
    }

    #[test]
    fn characterization_round_trip(s in space_strategy(8), g in builtin_gauge()) {
        let dm = derive_metric(&s);
        prop_assert!(dm.axiom_report.passed());
        let d3 = space::check_d3(&s, &g).unwrap().passed;
        let sandwich = check_sandwich(&s, &g, &dm).unwrap().passed;
        prop_assert_eq!(d3, sandwich);
    }

    #[test]
    fn reverse_direction_holds_for_any_sandwiching_metric(s in space_strategy(7), g in builtin_gauge()) {
        let dm = derive_metric(&s);
        match fmetric::derive::boundedness_implies_d3(&s, &g, &dm.d) {
            Ok(r) => prop_assert!(r.passed),
            Err(fmetric::Error::Sandwich { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn sandwich_slack_is_min_alpha(s in space_strategy(8)) {
        let log = Gauge::log(0.0).unwrap();
        let slack = check_sandwich(&s, &log, &derive_metric(&s)).unwrap().worst_slack;
        prop_assert_eq!(slack, min_alpha(&s, &log).unwrap().alpha);
    }

    #[test]
    fn derived_metric_is_idempotent(s in space_strategy(8)) {
        let dm = derive_metric(&s);
        prop_assert_eq!(derive_metric(&dm.to_space()).d, dm.d);
    }

    #[test]
    fn open_balls_grow_with_radius(s in space_strategy(8), r1 in 0.01..12.0f64, extra in 0.0..5.0f64, c in 0usize..8) {
        let center = s.label(c % s.len()).to_string();
        let small = topology::ball_members(&s, &Ball::open(center.clone(), r1)).unwrap();
        let large = topology::ball_members(&s, &Ball::open(center, r1 + extra)).unwrap();
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn closure_is_monotone(s in space_strategy(8), bits in prop::collection::vec(any::<bool>(), 8), t1 in 0.0..10.0f64, extra in 0.0..5.0f64) {
        let mask = SubsetMask::from_indices(s.len(), (0..s.len()).filter(|&i| bits[i])).unwrap();
        let c1 = topology::closure_approx(&s, &mask, t1).unwrap();
        let c2 = topology::closure_approx(&s, &mask, t1 + extra).unwrap();
        prop_assert!(mask.is_subset(&c1));
        prop_assert!(c1.is_subset(&c2));
    }

    #[test]
    fn greedy_net_separates_and_covers(s in space_strategy(8), bits in prop::collection::vec(any::<bool>(), 8), r in 0.05..12.0f64) {
        prop_assume!(bits.iter().take(s.len()).any(|&b| b));
        let mask = SubsetMask::from_indices(s.len(), (0..s.len()).filter(|&i| bits[i])).unwrap();
        let net = topology::greedy_net(&s, &mask, r).unwrap();
        prop_assert!(net.covered);
        let centers: Vec<usize> = net.centers.iter().map(|c| s.index_of(c).unwrap()).collect();
        for (a, &ca) in centers.iter().enumerate() {
            for &cb in &centers[a + 1..] {
                prop_assert!(s.d(ca, cb) >= r);
            }
        }
        for y in mask.indices() {
            prop_assert!(centers.iter().any(|&c| s.d(c, y) < r));
        }
    }

    #[test]
    fn closed_sets_contain_sampled_limits(
        s in space_strategy(7),
        bits in prop::collection::vec(any::<bool>(), 7),
        seq in prop::collection::vec(0usize..7, 2..12),
        limit in 0usize..7,
        tol in 0.01..3.0f64,
    ) {
        let n = s.len();
        let mask = SubsetMask::from_indices(n, (0..n).filter(|&i| bits[i])).unwrap();
        // Complement is open on a finite space, so the mask is closed.
        prop_assert!(topology::is_f_open(&s, &mask.complement()).unwrap().open);
        let pts: Vec<SeqPoint> = seq.iter().filter(|&&i| mask.contains(i % n)).map(|&i| SeqPoint::from(s.label(i % n))).collect();
        prop_assume!(!pts.is_empty());
        let sample = SequenceSample::new(pts, None, tol).unwrap();
        let x = Point::Index(limit % n);
        if sequences::is_f_convergent_to(&s, &sample, x).unwrap().passed {
            let closure = topology::closure_approx(&s, &mask, tol).unwrap();
            prop_assert!(closure.contains(limit % n));
        }
    }

    #[test]
    fn convergent_samples_are_cauchy(
        pts in prop::collection::vec(-5.0..5.0f64, 1..10),
        limit_idx in 0usize..10,
        tail in prop::collection::vec(-1.0..1.0f64, 1..10),
        tol in 0.01..1.0f64,
    ) {
        // Points on a line with the usual metric; the tail hugs one point.
        let limit_idx = limit_idx % pts.len();
        let s = common::line(&pts);
        let limit = pts[limit_idx];
        let mut seq_pts: Vec<SeqPoint> = (0..pts.len()).map(|i| SeqPoint::from(s.label(i))).collect();
        let tail_start = seq_pts.len();
        let close: Vec<usize> = (0..pts.len()).filter(|&i| (pts[i] - limit).abs() <= tol * tail[0].abs()).collect();
        for (k, _) in tail.iter().enumerate() {
            seq_pts.push(SeqPoint::from(s.label(close[k % close.len()])));
        }
        let sample = SequenceSample::new(seq_pts, Some(tail_start), tol).unwrap();
        let x = Point::Index(limit_idx);
        let conv = sequences::is_f_convergent_to(&s, &sample, x).unwrap();
        prop_assert!(conv.passed);
        prop_assert!(sequences::is_f_cauchy(&s, &sample.with_tol(2.0 * tol).unwrap()).unwrap().passed);
        for g in [Gauge::log(0.0).unwrap(), Gauge::neg_reciprocal(0.0).unwrap()] {
            let r = sequences::convergent_implies_cauchy(&s, &g, &sample, x, 4.0 * tol).unwrap();
            prop_assert!(r.passed);
        }
    }

    #[test]
    fn exp_space_rigidity(n in 1usize..8, seq in prop::collection::vec(0usize..8, 2..20)) {
        let s = gen_exp(n).unwrap();
        let pts: Vec<SeqPoint> = seq.iter().map(|&i| SeqPoint::Label((i % (n + 1)).to_string())).collect();
        let sample = SequenceSample::new(pts.clone(), None, 0.999).unwrap();
        let cauchy = sequences::is_f_cauchy(&s, &sample).unwrap();
        if cauchy.max_deviation < 1.0 {
            let tail = &pts[sample.tail_start()..];
            prop_assert!(tail.iter().all(|p| p == &tail[0]));
        }
    }

    #[test]
    fn verdicts_monotone_in_tolerance(s in space_strategy(6), seq in prop::collection::vec(0usize..6, 1..12), t1 in 0.01..5.0f64, extra in 0.0..5.0f64) {
        let n = s.len();
        let pts: Vec<SeqPoint> = seq.iter().map(|&i| SeqPoint::from(s.label(i % n))).collect();
        let tight = SequenceSample::new(pts, None, t1).unwrap();
        let loose = tight.with_tol(t1 + extra).unwrap();
        let x = Point::Index(seq[0] % n);
        if sequences::is_f_convergent_to(&s, &tight, x).unwrap().passed {
            prop_assert!(sequences::is_f_convergent_to(&s, &loose, x).unwrap().passed);
        }
        if sequences::is_f_cauchy(&s, &tight).unwrap().passed {
            prop_assert!(sequences::is_f_cauchy(&s, &loose).unwrap().passed);
        }
    }

    #[test]
    fn contraction_solves_are_certified(
        slope in -0.95..0.95f64,
        offset in -10.0..10.0f64,
        x0 in -50.0..50.0f64,
        eps_exp in 2..10i32,
    ) {
        let eps = 10f64.powi(-eps_exp);
        let line = RealLine::usual(RealLine::linspace(-100.0, 100.0, 41));
        prop_assume!(slope.abs() > 1e-3);
        let fixed = offset / (1.0 - slope);
        let mut stars = Vec::new();
        for g in [Gauge::log(0.0).unwrap(), Gauge::neg_reciprocal(0.0).unwrap()] {
            let p = ContractionProblem::new(&line, move |x: &f64| slope * x + offset, g)
                .with_k(slope.abs());
            let r = banach::solve_fixed_point(&p, x0, eps, SolveOptions { trace: true }).unwrap();
            prop_assert!(r.iterations <= r.bound_n);
            prop_assert!(r.residual <= eps);
            prop_assert!((r.x_star - fixed).abs() <= eps * (1.0 + 1e-9) + 1e-12 * fixed.abs());
            let trace = r.trace.as_ref().unwrap();
            for w in trace.windows(3) {
                let (a, b) = ((w[0] - w[1]).abs(), (w[1] - w[2]).abs());
                // Rounding in slope*x + offset costs a few ulps per step.
                let ulps = 8.0 * f64::EPSILON * w.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                prop_assert!(b <= slope.abs() * a * (1.0 + 1e-9) + ulps);
            }
            prop_assert!(banach::check_uniqueness(&p, x0, -x0 + 3.0, eps).unwrap().passed);
            stars.push(r.x_star);
        }
        prop_assert!((stars[0] - stars[1]).abs() <= 2.0 * eps);
    }
}

#[test]
fn generated_spaces_match_brute_force_exactly() {
    for s in generated_spaces().into_iter().filter(|s| s.len() <= 6) {
        assert_eq!(
            space::shortest_chain_infimum(&s),
            common::brute_force_all(s.matrix()),
            "{:?}",
            s.family()
        );
    }
}

#[test]
fn generated_spaces_round_trip() {
    for s in generated_spaces() {
        for g in [
            Gauge::log(0.0).unwrap(),
            Gauge::neg_reciprocal(0.0).unwrap(),
        ] {
            let alpha = min_alpha(&s, &g).unwrap().alpha;
            for a in [0.0, alpha * 0.5, alpha, alpha + 1.0] {
                let g = g.with_alpha(a).unwrap();
                let d3 = space::check_d3(&s, &g).unwrap().passed;
                let sw = check_sandwich(&s, &g, &derive_metric(&s)).unwrap().passed;
                assert_eq!(d3, sw, "{:?} alpha={a}", s.family());
            }
        }
    }
}

#[test]
fn square_grid_alpha_is_log_n() {
    let log = Gauge::log(0.0).unwrap();
    for n in 2..=32usize {
        let a = min_alpha(&gen_square_grid(n).unwrap(), &log).unwrap();
        let expected = (n as f64).ln();
        assert!(
            (a.alpha - expected).abs() <= 1e-12 * expected,
            "n={n}: {} vs {expected}",
            a.alpha
        );
        if n.is_power_of_two() {
            assert_eq!(a.alpha, expected, "n={n}");
        }
    }
}

#[test]
fn metric_space_has_zero_alpha() {
    let s = common::line(&[0.0, 0.25, 1.0, 2.0, 3.5]);
    assert_eq!(min_alpha(&s, &Gauge::log(0.0).unwrap()).unwrap().alpha, 0.0);
    assert_eq!(&derive_metric(&s).d, s.matrix());
    assert!(classify(&s).metric);
}

#[test]
fn continuous_weights_match_brute_force_closely() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rand::Rng::gen_range(&mut rng, 2..=6);
        let s = common::random_space(n, || common::uniform_weight(&mut rng));
        let fast = space::shortest_chain_infimum(&s);
        let slow: DistanceMatrix = common::brute_force_all(s.matrix());
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (fast.get(i, j), slow.get(i, j));
                assert!((a - b).abs() <= 1e-12 * b.max(1.0), "{a} vs {b}");
            }
        }
    }
}
