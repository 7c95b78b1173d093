//! Scalar functions applied spectrally in the trace and anti-norm checks.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::TheoremError;

const SAMPLE_POINTS: usize = 64;
const SHAPE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Convex,
    ConcaveNonnegative,
}

/// A named function on `[0, inf)` with a declared shape.
#[derive(Clone)]
pub struct FunctionMenuItem {
    name: String,
    shape: Shape,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for FunctionMenuItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionMenuItem")
            .field("name", &self.name)
            .field("shape", &self.shape)
            .finish()
    }
}

impl FunctionMenuItem {
    pub fn custom(name: impl Into<String>, shape: Shape, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            shape,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Applies the function to each value after clamping it to `[0, inf)`.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&t| self.eval(t.max(0.0))).collect()
    }

    /// Samples 64 points of `[0, 4 * lambda_max]` and checks finiteness,
    /// midpoint convexity (or concavity and nonnegativity) on every pair.
    pub fn validate(&self, lambda_max: f64) -> Result<(), TheoremError> {
        let top = 4.0 * if lambda_max > 0.0 { lambda_max } else { 1.0 };
        let pts: Vec<f64> = (0..SAMPLE_POINTS)
            .map(|i| top * i as f64 / (SAMPLE_POINTS - 1) as f64)
            .collect();
        let vals: Vec<f64> = pts.iter().map(|&t| self.eval(t)).collect();
        let fail = |reason: String| TheoremError::InvalidFunction {
            name: self.name.clone(),
            reason,
        };
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return Err(fail(format!("non-finite value at t = {}", pts[i])));
        }
        if self.shape == Shape::ConcaveNonnegative {
            if let Some(i) = vals.iter().position(|&v| v < 0.0) {
                return Err(fail(format!("negative value {} at t = {}", vals[i], pts[i])));
            }
        }
        for i in 0..SAMPLE_POINTS {
            for j in i + 1..SAMPLE_POINTS {
                let mid = self.eval(0.5 * (pts[i] + pts[j]));
                let chord = 0.5 * (vals[i] + vals[j]);
                let tol = SHAPE_TOL * (1.0 + vals[i].abs() + vals[j].abs());
                let gap = match self.shape {
                    Shape::Convex => chord - mid,
                    Shape::ConcaveNonnegative => mid - chord,
                };
                if !(gap >= -tol) {
                    return Err(fail(format!(
                        "midpoint test fails between t = {} and t = {} (gap {gap:.3e})",
                        pts[i], pts[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `t ln t` with `0 ln 0 = 0`.
fn t_log_t(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

/// `{t^2, exp(t), max(t - lambda_max/2, 0), t ln t}`.
pub fn convex_menu(lambda_max: f64) -> Vec<FunctionMenuItem> {
    let c = 0.5 * lambda_max;
    vec![
        FunctionMenuItem::custom("t^2", Shape::Convex, |t| t * t),
        FunctionMenuItem::custom("exp", Shape::Convex, f64::exp),
        FunctionMenuItem::custom("hinge", Shape::Convex, move |t| (t - c).max(0.0)),
        FunctionMenuItem::custom("t*ln(t)", Shape::Convex, t_log_t),
    ]
}

/// `{sqrt(t), ln(1 + t), min(t, median), t / (1 + t)}`.
pub fn concave_menu(median: f64) -> Vec<FunctionMenuItem> {
    let c = median.max(0.0);
    vec![
        FunctionMenuItem::custom("sqrt", Shape::ConcaveNonnegative, f64::sqrt),
        FunctionMenuItem::custom("ln(1+t)", Shape::ConcaveNonnegative, f64::ln_1p),
        FunctionMenuItem::custom("min(t,c)", Shape::ConcaveNonnegative, move |t| t.min(c)),
        FunctionMenuItem::custom("t/(1+t)", Shape::ConcaveNonnegative, |t| t / (1.0 + t)),
    ]
}

pub fn identity_function(shape: Shape) -> FunctionMenuItem {
    FunctionMenuItem::custom("t", shape, |t| t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn menus_validate() {
        for lmax in [0.0, 0.5, 3.0, 40.0] {
            for g in convex_menu(lmax) {
                g.validate(lmax).unwrap_or_else(|e| panic!("{e}"));
            }
            for f in concave_menu(lmax / 2.0) {
                f.validate(lmax).unwrap_or_else(|e| panic!("{e}"));
            }
        }
        identity_function(Shape::Convex).validate(1.0).unwrap();
        identity_function(Shape::ConcaveNonnegative).validate(1.0).unwrap();
    }

    #[test]
    fn bad_functions_are_rejected() {
        let concave_as_convex = FunctionMenuItem::custom("sqrt", Shape::Convex, f64::sqrt);
        assert!(matches!(
            concave_as_convex.validate(1.0),
            Err(TheoremError::InvalidFunction { .. })
        ));
        let negative = FunctionMenuItem::custom("t-1", Shape::ConcaveNonnegative, |t| t - 1.0);
        assert!(negative.validate(1.0).is_err());
        let convex_as_concave = FunctionMenuItem::custom("t^2", Shape::ConcaveNonnegative, |t| t * t);
        assert!(convex_as_concave.validate(1.0).is_err());
        let blowup = FunctionMenuItem::custom("1/t", Shape::Convex, |t| 1.0 / t);
        assert!(blowup.validate(1.0).is_err());
    }

    #[test]
    fn t_log_t_at_zero() {
        assert_eq!(t_log_t(0.0), 0.0);
        assert!((t_log_t(std::f64::consts::E) - std::f64::consts::E).abs() < 1e-15);
    }
}
