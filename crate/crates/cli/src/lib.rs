//! Command-line front end: loads spaces and gauges, runs one check, and
//! emits a JSON report.
//!
//! Exit status: 0 when the verdict passes, 1 when it fails (the report is
//! still written), 2 on usage or IO errors.

pub mod expr;
mod gallery;

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fmetric::banach::{self, ContractionProblem, RealLine, SolveOptions};
use fmetric::derive::{self, check_sandwich, derive_metric};
use fmetric::sequences::{self, SeqPoint, SequenceSample};
use fmetric::space::{self, load_space};
use fmetric::topology::{self, Ball, SubsetMask};
use fmetric::{Error as CoreError, FiniteSpace, Gauge, Point};

use expr::RealExpr;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fmetric",
    version,
    about = "Check, classify and solve on finite F-metric spaces"
)]
pub struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Reserved for randomized suites; accepted and echoed in reports.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Identity, symmetry and the generalized triangle inequality.
    Check {
        #[command(flatten)]
        space: SpaceArg,
        #[command(flatten)]
        gauge: GaugeArg,
    },
    /// Minimal shift for ln, and the b-metric / s-relaxed constants.
    Classify {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// Chain-infimum metric, with optional sandwich checks.
    Derive {
        #[command(flatten)]
        space: SpaceArg,
        /// Gauge for the sandwich check; omitted means no check.
        #[arg(long)]
        gauge: Option<String>,
        #[arg(long, requires = "gauge", allow_negative_numbers = true)]
        alpha: Option<f64>,
        /// Write the derived metric as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Check the space against this metric instead (space source syntax).
        #[arg(long, value_name = "SOURCE", requires = "gauge")]
        external: Option<String>,
    },
    /// Balls, openness, tolerance closures and the JAL condition.
    Topology {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, value_enum)]
        op: TopologyOp,
        /// Ball center.
        #[arg(long)]
        center: Option<String>,
        /// Ball radius.
        #[arg(long)]
        r: Option<f64>,
        /// Use the closed ball.
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        mask: MaskArg,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        seq: SeqArg,
        /// Limit point for `jal`.
        #[arg(long)]
        limit: Option<String>,
    },
    /// Convergence, Cauchy and stabilization verdicts on a sampled sequence.
    Sequence {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, value_enum)]
        op: SequenceOp,
        #[command(flatten)]
        seq: SeqArg,
        /// Candidate limit.
        #[arg(long)]
        limit: Option<String>,
        /// Second candidate limit for `unique`.
        #[arg(long)]
        other: Option<String>,
        /// Target epsilon for `implies-cauchy`.
        #[arg(long)]
        eps: Option<f64>,
        /// Distance threshold for `stabilize`.
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[command(flatten)]
        gauge: GaugeArg,
    },
    /// Certified fixed-point iteration.
    Fixpoint {
        /// A finite space source, or a distance expression in x and y.
        /// Omitted means the real line with abs(x-y).
        #[arg(long)]
        space: Option<String>,
        /// Expression in x, or comma-separated target labels on a finite space.
        #[arg(long)]
        map: String,
        #[arg(long, allow_negative_numbers = true)]
        x0: String,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        gauge: GaugeArg,
        /// Known contraction constant; estimated otherwise.
        #[arg(long)]
        k: Option<f64>,
        /// Second start for a uniqueness check.
        #[arg(long, allow_negative_numbers = true)]
        second: Option<String>,
        /// Restrict the real line to [lo, hi].
        #[arg(long, requires = "hi", allow_negative_numbers = true)]
        lo: Option<f64>,
        #[arg(long, requires = "lo", allow_negative_numbers = true)]
        hi: Option<f64>,
        /// Sample grid size for estimating k on the real line.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Include every iterate in the report.
        #[arg(long)]
        trace: bool,
    },
    /// Greedy r-net.
    Net {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        mask: MaskArg,
    },
    /// Built-in example bundle.
    Examples,
}

#[derive(Debug, Args)]
pub struct SpaceArg {
    /// `hybrid:5`, `exp:4`, `square_grid:10`, inline JSON, or a .json/CSV path.
    #[arg(long)]
    pub space: String,
}

#[derive(Debug, Args)]
pub struct GaugeArg {
    /// `log`, `neg_reciprocal`, inline JSON, or a JSON file.
    #[arg(long, default_value = "log")]
    pub gauge: String,
    /// Overrides the shift given by the gauge descriptor.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MaskArg {
    /// Comma-separated labels; the whole space when omitted.
    #[arg(long)]
    pub mask: Option<String>,
}

#[derive(Debug, Args)]
pub struct SeqArg {
    /// Comma-separated labels or coordinates, `reciprocal:N` for 1/n, or a
    /// JSON file `{"points": [...], "tail_start": .., "tol": ..}`.
    #[arg(long)]
    pub seq: Option<String>,
    /// First index of the tail; second half by default.
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub seq_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TopologyOp {
    Ball,
    Open,
    Closure,
    Jal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SequenceOp {
    Convergent,
    Cauchy,
    Unique,
    ImpliesCauchy,
    Stabilize,
}

/// A verdict and the JSON report describing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub report: Value,
}

impl Outcome {
    fn new(command: &str, passed: bool, body: Value) -> Self {
        let mut report = json!({ "command": command, "passed": passed });
        if let (Value::Object(dst), Value::Object(src)) = (&mut report, body) {
            dst.extend(src);
        }
        Outcome { passed, report }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

pub fn parse_gauge(source: &str, alpha: Option<f64>) -> Result<Gauge> {
    let source = source.trim();
    let gauge = match source {
        "log" => Gauge::log(0.0)?,
        "neg_reciprocal" | "neg-reciprocal" => Gauge::neg_reciprocal(0.0)?,
        s if s.starts_with('{') => serde_json::from_str::<Gauge>(s)
            .map_err(|e| anyhow!("--gauge: invalid descriptor: {e}"))?,
        path => {
            let text = std::fs::read_to_string(path).with_context(|| {
                format!(
                    "--gauge: cannot read `{path}` (expected log, neg_reciprocal, JSON or a file)"
                )
            })?;
            serde_json::from_str::<Gauge>(&text)
                .map_err(|e| anyhow!("--gauge: invalid descriptor in `{path}`: {e}"))?
        }
    };
    match alpha {
        Some(a) => gauge.with_alpha(a).map_err(|e| anyhow!("--alpha: {e}")),
        None => Ok(gauge),
    }
}

fn space_from(arg: &SpaceArg) -> Result<FiniteSpace> {
    load_space(&arg.space).map_err(|e| anyhow!("--space: {e}"))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

fn mask_from(space: &FiniteSpace, arg: &MaskArg) -> Result<SubsetMask> {
    match &arg.mask {
        None => Ok(SubsetMask::full(space.len())),
        Some(list) => {
            SubsetMask::from_labels(space, &split_list(list)).map_err(|e| anyhow!("--mask: {e}"))
        }
    }
}

fn point_from(space: &FiniteSpace, flag: &str, value: Option<&String>) -> Result<Point> {
    let label = value.ok_or_else(|| anyhow!("{flag} is required for this operation"))?;
    space.point(label).map_err(|e| anyhow!("{flag}: {e}"))
}

fn sample_from(arg: &SeqArg, default_tol: f64) -> Result<SequenceSample> {
    let source = arg
        .seq
        .as_deref()
        .ok_or_else(|| anyhow!("--seq is required for this operation"))?;
    let tol = arg.seq_tol.unwrap_or(default_tol);
    let sample = if let Some(count) = source.strip_prefix("reciprocal:") {
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| anyhow!("--seq: `{source}` needs a point count"))?;
        let points = (1..=count)
            .map(|n| SeqPoint::Coord(1.0 / n as f64))
            .collect();
        SequenceSample::new(points, arg.tail, tol)?
    } else if source.trim_end().ends_with(".json") {
        let text = std::fs::read_to_string(source)
            .with_context(|| format!("--seq: cannot read `{source}`"))?;
        let sample: SequenceSample =
            serde_json::from_str(&text).map_err(|e| anyhow!("--seq: `{source}`: {e}"))?;
        let sample = match arg.tail {
            Some(t) => sample.with_tail_start(t)?,
            None => sample,
        };
        match arg.seq_tol {
            Some(t) => sample.with_tol(t)?,
            None => sample,
        }
    } else {
        let points = split_list(source)
            .into_iter()
            .map(SeqPoint::Label)
            .collect();
        SequenceSample::new(points, arg.tail, tol)?
    };
    Ok(sample)
}

fn op_name(op: impl ValueEnum) -> String {
    op.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn space_summary(source: &str, space: &FiniteSpace) -> Value {
    json!({ "source": source, "points": space.len() })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut outcome = match &cli.command {
        Command::Check { space, gauge } => check(space, gauge),
        Command::Classify { space } => classify(space),
        Command::Derive {
            space,
            gauge,
            alpha,
            csv,
            external,
        } => derive(
            space,
            gauge.as_deref(),
            *alpha,
            csv.as_ref(),
            external.as_deref(),
        ),
        Command::Topology {
            space,
            op,
            center,
            r,
            closed,
            mask,
            tol,
            seq,
            limit,
        } => topology_cmd(
            space,
            *op,
            center.as_ref(),
            *r,
            *closed,
            mask,
            *tol,
            seq,
            limit.as_ref(),
        ),
        Command::Sequence {
            space,
            op,
            seq,
            limit,
            other,
            eps,
            threshold,
            gauge,
        } => sequence(
            space,
            *op,
            seq,
            limit.as_ref(),
            other.as_ref(),
            *eps,
            *threshold,
            gauge,
        ),
        Command::Fixpoint {
            space,
            map,
            x0,
            eps,
            gauge,
            k,
            second,
            lo,
            hi,
            grid,
            trace,
        } => {
            let gauge = parse_gauge(&gauge.gauge, gauge.alpha)?;
            let opts = FixOpts {
                map,
                x0,
                eps: *eps,
                gauge,
                k: *k,
                second: second.as_deref(),
                bounds: lo.zip(*hi),
                grid: *grid,
                trace: *trace,
            };
            fixpoint(space.as_deref(), &opts)
        }
        Command::Net { space, r, mask } => net(space, *r, mask),
        Command::Examples => Ok(gallery::examples()),
    }?;
    if let (Some(seed), Value::Object(map)) = (cli.seed, &mut outcome.report) {
        map.insert("seed".into(), json!(seed));
    }
    Ok(outcome)
}

fn check(space_arg: &SpaceArg, gauge_arg: &GaugeArg) -> Result<Outcome> {
    let space = space_from(space_arg)?;
    let gauge = parse_gauge(&gauge_arg.gauge, gauge_arg.alpha)?;
    let axioms = space::check_d1_d2(&space);
    let mut body = json!({
        "space": space_summary(&space_arg.space, &space),
        "gauge": to_value(&gauge),
        "axioms": to_value(&axioms),
    });
    let mut passed = axioms.passed();
    if axioms.d1_ok {
        // Monotonicity of f on every value the check actually evaluates.
        let chains = space::shortest_chain_infimum(&space);
        let mut probes: Vec<f64> = space
            .matrix()
            .to_rows()
            .into_iter()
            .chain(chains.to_rows())
            .flatten()
            .filter(|&t| t > 0.0)
            .collect();
        probes.sort_by(f64::total_cmp);
        probes.dedup();
        if !probes.is_empty() {
            let f1 = gauge.check_f1(&probes)?;
            passed &= f1.passed;
            body["gauge_monotone"] = to_value(&f1);
        }
        let d3 = space::check_d3(&space, &gauge)?;
        passed &= d3.passed;
        body["d3"] = to_value(&d3);
    }
    Ok(Outcome::new("check", passed, body))
}

fn classify(space_arg: &SpaceArg) -> Result<Outcome> {
    let space = space_from(space_arg)?;
    let report = space::classify(&space);
    let passed = report.d1_ok && report.d2_ok;
    Ok(Outcome::new(
        "classify",
        passed,
        json!({
            "space": space_summary(&space_arg.space, &space),
            "classification": to_value(&report),
        }),
    ))
}

fn derive(
    space_arg: &SpaceArg,
    gauge: Option<&str>,
    alpha: Option<f64>,
    csv: Option<&PathBuf>,
    external: Option<&str>,
) -> Result<Outcome> {
    let space = space_from(space_arg)?;
    let dm = derive_metric(&space);
    let mut passed = dm.axiom_report.passed();
    let mut body = json!({
        "space": space_summary(&space_arg.space, &space),
        "labels": space.labels(),
        "derived": to_value(&dm.d),
        "metric_axioms": to_value(&dm.axiom_report),
    });
    if let Some(path) = csv {
        std::fs::write(path, dm.to_csv())
            .with_context(|| format!("--csv: cannot write `{}`", path.display()))?;
        body["csv"] = json!(path.display().to_string());
    }
    if let Some(source) = gauge {
        let gauge = parse_gauge(source, alpha)?;
        body["gauge"] = to_value(&gauge);
        match external {
            None => {
                let sw = check_sandwich(&space, &gauge, &dm)?;
                passed &= sw.passed;
                body["sandwich"] = to_value(&sw);
            }
            Some(ext) => {
                let other = load_space(ext).map_err(|e| anyhow!("--external: {e}"))?;
                match derive::boundedness_implies_d3(&space, &gauge, other.matrix()) {
                    Ok(d3) => {
                        passed &= d3.passed;
                        body["external_d3"] = to_value(&d3);
                    }
                    Err(e @ (CoreError::MetricAxiom(_) | CoreError::Sandwich { .. })) => {
                        passed = false;
                        body["external_error"] = json!(e.to_string());
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(Outcome::new("derive", passed, body))
}

#[allow(clippy::too_many_arguments)]
fn topology_cmd(
    space_arg: &SpaceArg,
    op: TopologyOp,
    center: Option<&String>,
    r: Option<f64>,
    closed: bool,
    mask_arg: &MaskArg,
    tol: Option<f64>,
    seq: &SeqArg,
    limit: Option<&String>,
) -> Result<Outcome> {
    let space = space_from(space_arg)?;
    let summary = space_summary(&space_arg.space, &space);
    let need_tol = || tol.ok_or_else(|| anyhow!("--tol is required for this operation"));
    let (passed, body) = match op {
        TopologyOp::Ball => {
            let center = center.ok_or_else(|| anyhow!("--center is required for ball"))?;
            let r = r.ok_or_else(|| anyhow!("--r is required for ball"))?;
            let ball = if closed {
                Ball::closed(center.clone(), r)
            } else {
                Ball::open(center.clone(), r)
            };
            let members = topology::ball_members(&space, &ball)?;
            (
                true,
                json!({ "ball": to_value(&ball), "members": members.labels(&space) }),
            )
        }
        TopologyOp::Open => {
            let mask = mask_from(&space, mask_arg)?;
            let report = topology::is_f_open(&space, &mask)?;
            (
                report.open,
                json!({ "mask": mask.labels(&space), "open": to_value(&report) }),
            )
        }
        TopologyOp::Closure => {
            let mask = mask_from(&space, mask_arg)?;
            let tol = need_tol()?;
            let closure = topology::closure_approx(&space, &mask, tol)?;
            (
                true,
                json!({ "mask": mask.labels(&space), "tol": tol, "closure": closure.labels(&space) }),
            )
        }
        TopologyOp::Jal => {
            let tol = need_tol()?;
            let sample = sample_from(seq, tol)?;
            let x = point_from(&space, "--limit", limit)?;
            let report = topology::check_jal(&space, &sample, x, tol)?;
            (report.passed, json!({ "jal": to_value(&report) }))
        }
    };
    let mut body = body;
    body["space"] = summary;
    body["op"] = json!(op_name(op));
    Ok(Outcome::new("topology", passed, body))
}

#[allow(clippy::too_many_arguments)]
fn sequence(
    space_arg: &SpaceArg,
    op: SequenceOp,
    seq: &SeqArg,
    limit: Option<&String>,
    other: Option<&String>,
    eps: Option<f64>,
    threshold: f64,
    gauge_arg: &GaugeArg,
) -> Result<Outcome> {
    let space = space_from(space_arg)?;
    let sample = sample_from(seq, 0.01)?;
    let (passed, result) = match op {
        SequenceOp::Convergent => {
            let x = point_from(&space, "--limit", limit)?;
            let r = sequences::is_f_convergent_to(&space, &sample, x)?;
            (r.passed, to_value(&r))
        }
        SequenceOp::Cauchy => {
            let r = sequences::is_f_cauchy(&space, &sample)?;
            (r.passed, to_value(&r))
        }
        SequenceOp::Unique => {
            let x = point_from(&space, "--limit", limit)?;
            let y = point_from(&space, "--other", other)?;
            match sequences::assert_limit_unique(&space, &sample, x, y) {
                Ok(r) => (r.passed, to_value(&r)),
                Err(e @ CoreError::Precondition(_)) => (false, json!({ "error": e.to_string() })),
                Err(e) => return Err(e.into()),
            }
        }
        SequenceOp::ImpliesCauchy => {
            let x = point_from(&space, "--limit", limit)?;
            let eps = eps.ok_or_else(|| anyhow!("--eps is required for implies-cauchy"))?;
            let gauge = parse_gauge(&gauge_arg.gauge, gauge_arg.alpha)?;
            let r = sequences::convergent_implies_cauchy(&space, &gauge, &sample, x, eps)?;
            (
                r.passed,
                json!({ "gauge": to_value(&gauge), "implication": to_value(&r) }),
            )
        }
        SequenceOp::Stabilize => {
            let r = sequences::eventually_constant(&space, &sample, threshold)?;
            (r.passed, to_value(&r))
        }
    };
    Ok(Outcome::new(
        "sequence",
        passed,
        json!({
            "space": space_summary(&space_arg.space, &space),
            "op": op_name(op),
            "samples": sample.points().len(),
            "tail_start": sample.tail_start(),
            "tol": sample.tol(),
            "result": result,
        }),
    ))
}

struct FixOpts<'a> {
    map: &'a str,
    x0: &'a str,
    eps: f64,
    gauge: Gauge,
    k: Option<f64>,
    second: Option<&'a str>,
    bounds: Option<(f64, f64)>,
    grid: usize,
    trace: bool,
}

/// Solver failures that are verdicts about the map rather than bad input.
fn solver_verdict(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::NotContraction { .. } | CoreError::OutsideDomain { .. }
    )
}

fn fixpoint(space: Option<&str>, opts: &FixOpts<'_>) -> Result<Outcome> {
    if let Some(source) = space {
        if let Ok(finite) = load_space(source) {
            return fixpoint_finite(source, &finite, opts);
        }
        // Anything that names a file, descriptor or shorthand but failed to
        // load is an input error, not an expression.
        let t = source.trim();
        let lower = t.to_ascii_lowercase();
        let shorthand = t.split_once(':').is_some_and(|(k, n)| {
            !k.is_empty()
                && k.chars().all(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_digit())
        });
        if t.starts_with('{')
            || lower.ends_with(".json")
            || lower.ends_with(".csv")
            || shorthand
            || std::path::Path::new(t).is_file()
        {
            load_space(source).map_err(|e| anyhow!("--space: {e}"))?;
        }
    }
    fixpoint_real(space.unwrap_or("abs(x-y)"), opts)
}

fn fixpoint_real(distance: &str, opts: &FixOpts<'_>) -> Result<Outcome> {
    let dist = RealExpr::parse(distance).map_err(|e| anyhow!("--space: {e}"))?;
    let map = RealExpr::parse(opts.map).map_err(|e| anyhow!("--map: {e}"))?;
    let parse_x = |flag: &str, v: &str| -> Result<f64> {
        v.trim()
            .parse::<f64>()
            .map_err(|_| anyhow!("{flag}: `{v}` is not a number"))
    };
    let x0 = parse_x("--x0", opts.x0)?;
    map.eval(x0, 0.0).map_err(|e| anyhow!("--map: {e}"))?;
    dist.eval(x0, x0 + 1.0)
        .map_err(|e| anyhow!("--space: {e}"))?;
    let grid = match opts.bounds {
        Some((lo, hi)) => RealLine::linspace(lo, hi, opts.grid),
        None => RealLine::linspace(x0 - 100.0, x0 + 100.0, opts.grid),
    };
    let mut line = RealLine::new(move |a, b| dist.eval_or_nan(a, b), grid);
    if let Some((lo, hi)) = opts.bounds {
        line = line.bounded(lo, hi);
    }
    let mut problem = ContractionProblem::new(
        &line,
        |x: &f64| map.eval_or_nan(*x, 0.0),
        opts.gauge.clone(),
    );
    if let Some(k) = opts.k {
        problem = problem.with_k(k);
    }
    let mut body = json!({
        "space": { "distance": distance, "bounds": opts.bounds },
        "map": opts.map,
        "x0": x0,
        "gauge": to_value(&opts.gauge),
    });
    let report =
        match banach::solve_fixed_point(&problem, x0, opts.eps, SolveOptions { trace: opts.trace })
        {
            Ok(r) => r,
            Err(e) if solver_verdict(&e) => {
                body["error"] = json!(e.to_string());
                return Ok(Outcome::new("fixpoint", false, body));
            }
            Err(e) => return Err(e.into()),
        };
    // Decay faster than the claimed k contradicts the certificate.
    let mut passed = report.decay_violations == 0;
    body["solution"] = to_value(&report);
    if let Some(s) = opts.second {
        let x1 = parse_x("--second", s)?;
        match banach::check_uniqueness(&problem, x0, x1, opts.eps) {
            Ok(u) => {
                passed &= u.passed;
                body["uniqueness"] = json!({
                    "passed": u.passed,
                    "distance": u.distance,
                    "second_x_star": u.second.x_star,
                });
            }
            Err(e) if solver_verdict(&e) => {
                passed = false;
                body["uniqueness"] = json!({ "passed": false, "error": e.to_string() });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome::new("fixpoint", passed, body))
}

fn fixpoint_finite(source: &str, space: &FiniteSpace, opts: &FixOpts<'_>) -> Result<Outcome> {
    let targets = split_list(opts.map);
    if targets.len() != space.len() {
        bail!(
            "--map: expected {} comma-separated target labels (one per point), got {}",
            space.len(),
            targets.len()
        );
    }
    let image: Vec<usize> = targets
        .iter()
        .map(|t| space.index_of(t).map_err(|e| anyhow!("--map: {e}")))
        .collect::<Result<_>>()?;
    let x0 = space.index_of(opts.x0).map_err(|e| anyhow!("--x0: {e}"))?;
    let mut problem = ContractionProblem::new(space, |i: &usize| image[*i], opts.gauge.clone());
    if let Some(k) = opts.k {
        problem = problem.with_k(k);
    }
    let mut body = json!({
        "space": space_summary(source, space),
        "map": targets,
        "x0": opts.x0,
        "gauge": to_value(&opts.gauge),
    });
    let report =
        match banach::solve_fixed_point(&problem, x0, opts.eps, SolveOptions { trace: opts.trace })
        {
            Ok(r) => r,
            Err(e) if solver_verdict(&e) => {
                body["error"] = json!(e.to_string());
                return Ok(Outcome::new("fixpoint", false, body));
            }
            Err(e) => return Err(e.into()),
        };
    let mut solution = to_value(&report);
    solution["x_star"] = json!(space.label(report.x_star));
    if let Some(trace) = &report.trace {
        let labels: Vec<&str> = trace.iter().map(|&i| space.label(i)).collect();
        solution["trace"] = json!(labels);
    }
    body["solution"] = solution;
    let mut passed = report.decay_violations == 0;
    if let Some(s) = opts.second {
        let x1 = space.index_of(s).map_err(|e| anyhow!("--second: {e}"))?;
        let u = banach::check_uniqueness(&problem, x0, x1, opts.eps)?;
        passed &= u.passed;
        body["uniqueness"] = json!({
            "passed": u.passed,
            "distance": u.distance,
            "second_x_star": space.label(u.second.x_star),
        });
    }
    Ok(Outcome::new("fixpoint", passed, body))
}

fn net(space_arg: &SpaceArg, r: f64, mask_arg: &MaskArg) -> Result<Outcome> {
    let space = space_from(space_arg)?;
    let mask = mask_from(&space, mask_arg)?;
    let cover = topology::greedy_net(&space, &mask, r).map_err(|e| anyhow!("--r: {e}"))?;
    Ok(Outcome::new(
        "net",
        cover.covered,
        json!({
            "space": space_summary(&space_arg.space, &space),
            "mask": mask.labels(&space),
            "cover": to_value(&cover),
        }),
    ))
}

/// Runs the parsed command, writes the report, and returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let text = outcome.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: --out: cannot write `{}`: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    outcome.exit_code()
}
