//! Computable F-metric spaces.
//!
//! A distance `D` on a set is an F-metric when it is symmetric, vanishes
//! exactly on the diagonal, and satisfies the generalized triangle
//! inequality
//!
//! ```text
//! D(x, y) > 0  =>  f(D(x, y)) <= f(D(u1, u2) + ... + D(u_{N-1}, u_N)) + alpha
//! ```
//!
//! for every chain `u1 = x, ..., u_N = y`, where `f` is non-decreasing on
//! `(0, inf)` and diverges to `-inf` at `0+`. The pair `(f, alpha)` is a
//! [`Gauge`].
//!
//! The crate works on finite point sets (and finitely sampled sequences):
//!
//! * [`gauge`]: gauge pairs, their axioms and the `delta(eps)` resolver.
//! * [`space`]: matrix-backed spaces, generators, axiom checks and
//!   classification against b-metric and s-relaxed constants.
//! * [`derive`]: the chain-infimum metric and the sandwich characterization.
//! * [`topology`]: balls, openness radii, tolerance closures, greedy nets.
//! * [`sequences`]: convergence, Cauchy and stabilization verdicts.
//! * [`banach`]: contraction constants, certified iteration bounds and the
//!   fixed-point solver.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banach;
pub mod derive;
mod error;
pub mod gauge;
pub mod report;
pub mod sequences;
pub mod space;
pub mod topology;

pub use banach::{
    check_uniqueness, estimate_k, iteration_bound, local_ball_invariance, solve_fixed_point,
    ContractionProblem, Domain, FixedPointReport, KEstimate, RealLine, SolveOptions,
};
pub use derive::{derive_metric, DerivedMetric};
pub use error::{Error, Result};
pub use gauge::{Gauge, GaugeKind, ToleranceQuery};
pub use sequences::{SeqPoint, SequenceSample};
pub use space::{DistanceMatrix, FiniteSpace, Point, TwoMetricTable};
pub use topology::{Ball, CoverReport, SubsetMask};

/// Absolute slack used when comparing gauge values in verdicts.
pub const GAUGE_SLACK: f64 = 1e-12;
