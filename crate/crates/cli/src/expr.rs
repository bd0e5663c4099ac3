//! Real-valued expressions in `x` (and `y`) for maps and distances.
//!
//! Plain `abs`, `exp`, `ln`, `sqrt` are available alongside the evalexpr
//! builtins (`min`, `max`, `math::*`). Integer literals divide as integers,
//! so write `0.5 * x` rather than `1/2 * x`.

use anyhow::{anyhow, Result};
use evalexpr::{Context, EvalexprError, EvalexprResult, Node, Value};

pub struct RealExpr {
    source: String,
    tree: Node,
}

struct Vars {
    x: Value,
    y: Value,
}

impl Context for Vars {
    fn get_value(&self, identifier: &str) -> Option<&Value> {
        match identifier {
            "x" => Some(&self.x),
            "y" => Some(&self.y),
            _ => None,
        }
    }

    fn call_function(&self, identifier: &str, argument: &Value) -> EvalexprResult<Value> {
        let unary: fn(f64) -> f64 = match identifier {
            "abs" => f64::abs,
            "exp" => f64::exp,
            "ln" => f64::ln,
            "sqrt" => f64::sqrt,
            _ => return Err(EvalexprError::FunctionIdentifierNotFound(identifier.into())),
        };
        Ok(Value::Float(unary(argument.as_number()?)))
    }

    fn are_builtin_functions_disabled(&self) -> bool {
        false
    }

    fn set_builtin_functions_disabled(&mut self, _disabled: bool) -> EvalexprResult<()> {
        Err(EvalexprError::CustomMessage(
            "builtins are always enabled".into(),
        ))
    }
}

impl RealExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let tree = evalexpr::build_operator_tree(source)
            .map_err(|e| anyhow!("cannot parse expression `{source}`: {e}"))?;
        Ok(RealExpr {
            source: source.to_string(),
            tree,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let vars = Vars {
            x: Value::Float(x),
            y: Value::Float(y),
        };
        self.tree
            .eval_number_with_context(&vars)
            .map_err(|e| anyhow!("evaluating `{}` at x={x}, y={y}: {e}", self.source))
    }

    /// Evaluates, mapping failures to NaN for use inside infallible closures.
    pub fn eval_or_nan(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_map() {
        let e = RealExpr::parse("0.5*x+1").unwrap();
        assert_eq!(e.eval(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(e.eval(2.0, 0.0).unwrap(), 2.0);
    }

    #[test]
    fn custom_and_builtin_functions() {
        let e = RealExpr::parse("abs(x-y) + ln(exp(1)) + sqrt(4) + max(x, y)").unwrap();
        assert_eq!(e.eval(1.0, 3.0).unwrap(), 2.0 + 1.0 + 2.0 + 3.0);
        let e = RealExpr::parse("math::abs(x)").unwrap();
        assert_eq!(e.eval(-2.5, 0.0).unwrap(), 2.5);
    }

    #[test]
    fn errors_name_the_expression() {
        assert!(RealExpr::parse("(x + 2").is_err());
        let e = RealExpr::parse("z + 1").unwrap();
        let msg = e.eval(0.0, 0.0).unwrap_err().to_string();
        assert!(msg.contains("z + 1"), "{msg}");
        assert!(e.eval_or_nan(0.0, 0.0).is_nan());
    }
}
