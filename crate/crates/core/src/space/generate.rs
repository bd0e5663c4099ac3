use serde::Serialize;

use super::FiniteSpace;
use crate::error::{Error, Result};

/// Parametric distance families on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(x - y)^2` when both points lie in `[0, 3]`, `|x - y|` otherwise.
    Hybrid,
    /// `exp(|x - y|)` off the diagonal.
    Exp,
    /// `(x - y)^2`.
    SquareGrid,
}

impl Family {
    /// Distance between two distinct coordinates.
    pub fn distance(self, x: f64, y: f64) -> f64 {
        let gap = (x - y).abs();
        match self {
            Family::Hybrid => {
                let inner = |t: f64| (0.0..=3.0).contains(&t);
                if inner(x) && inner(y) {
                    gap * gap
                } else {
                    gap
                }
            }
            Family::Exp => gap.exp(),
            Family::SquareGrid => gap * gap,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Hybrid => "hybrid",
            Family::Exp => "exp",
            Family::SquareGrid => "square_grid",
        }
    }
}

fn integer_points(n: usize) -> (Vec<String>, Vec<f64>) {
    (
        (0..=n).map(|i| i.to_string()).collect(),
        (0..=n).map(|i| i as f64).collect(),
    )
}

/// Points `{0, ..., n}` with the hybrid squared/absolute distance.
pub fn gen_hybrid(n: usize) -> Result<FiniteSpace> {
    if n < 4 {
        return Err(Error::Argument(format!(
            "hybrid space needs n >= 4, got {n}"
        )));
    }
    let (labels, coords) = integer_points(n);
    Ok(FiniteSpace::with_family(labels, Family::Hybrid, coords))
}

/// Points `{0, ..., n}` with `D(x, y) = exp(|x - y|)` off the diagonal.
pub fn gen_exp(n: usize) -> Result<FiniteSpace> {
    if n < 1 {
        return Err(Error::Argument("exp space needs n >= 1".into()));
    }
    let (labels, coords) = integer_points(n);
    Ok(FiniteSpace::with_family(labels, Family::Exp, coords))
}

/// Points `{i/n : i = 0..n}` with `D(x, y) = (x - y)^2`.
pub fn gen_square_grid(n: usize) -> Result<FiniteSpace> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "square grid needs n >= 2, got {n}"
        )));
    }
    let coords: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let labels = coords.iter().map(|c| c.to_string()).collect();
    Ok(FiniteSpace::with_family(labels, Family::SquareGrid, coords))
}
