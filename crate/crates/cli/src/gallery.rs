//! Built-in example bundle: the hybrid space, the exponential space and the
//! square grid, each with the verdict it is known for.

use serde_json::{json, Value};

use fmetric::space::{self, gen_exp, gen_hybrid, gen_square_grid, min_alpha};
use fmetric::Gauge;

use crate::Outcome;

fn hybrid() -> (bool, Value) {
    let s = gen_hybrid(5).expect("n >= 4");
    let ln3 = 3f64.ln();
    let d3 = space::check_d3(&s, &Gauge::log(ln3).expect("valid")).expect("log on positive values");
    let a = min_alpha(&s, &Gauge::log(0.0).expect("valid")).expect("log on positive values");
    let passed = d3.passed && a.alpha == ln3;
    (
        passed,
        json!({
            "name": "hybrid",
            "space": "hybrid:5",
            "gauge": { "kind": "log", "alpha": ln3 },
            "d3_passed": d3.passed,
            "min_alpha": a.alpha,
            "witness": a.witness,
        }),
    )
}

fn exp() -> (bool, Value) {
    let g = Gauge::neg_reciprocal(1.0).expect("valid");
    let s = gen_exp(4).expect("n >= 1");
    let d3 = space::check_d3(&s, &g).expect("-1/t on positive values");
    // The s-relaxed constant keeps growing with n, so no single K works.
    let trend: Vec<Value> = (1..=12)
        .map(|n| {
            let k = space::classify(&gen_exp(n).expect("n >= 1")).min_k_relaxed;
            json!({ "n": n, "min_k_relaxed": k })
        })
        .collect();
    let increasing = trend
        .windows(2)
        .all(|w| w[1]["min_k_relaxed"].as_f64() > w[0]["min_k_relaxed"].as_f64());
    (
        d3.passed && increasing,
        json!({
            "name": "exp",
            "space": "exp:4",
            "gauge": { "kind": "neg_reciprocal", "alpha": 1.0 },
            "d3_passed": d3.passed,
            "relaxed_trend": trend,
            "relaxed_increasing": increasing,
        }),
    )
}

fn square_grid() -> (bool, Value) {
    let log = Gauge::log(0.0).expect("valid");
    let mut passed = true;
    let rows: Vec<Value> = [2usize, 4, 8, 16, 32]
        .into_iter()
        .map(|n| {
            let a = min_alpha(&gen_square_grid(n).expect("n >= 2"), &log)
                .expect("log on positive values")
                .alpha;
            let ln_n = (n as f64).ln();
            passed &= (a - ln_n).abs() <= 1e-12 * ln_n;
            json!({ "n": n, "min_alpha": a, "ln_n": ln_n })
        })
        .collect();
    (
        passed,
        json!({ "name": "square_grid", "gauge": { "kind": "log" }, "min_alpha_table": rows }),
    )
}

pub fn examples() -> Outcome {
    let mut passed = true;
    let entries: Vec<Value> = [hybrid(), exp(), square_grid()]
        .into_iter()
        .map(|(ok, mut v)| {
            passed &= ok;
            v["passed"] = json!(ok);
            v
        })
        .collect();
    Outcome::new("examples", passed, json!({ "examples": entries }))
}
