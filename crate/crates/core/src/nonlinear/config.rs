//! Solver knobs.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerances and limits shared by Newton, the fixed-point map and continuation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Residual tolerance in the sup norm, relative to the size of the right-hand side.
    pub rtol: f64,
    /// Relative step tolerance of the fixed-point iteration.
    pub step_tol: f64,
    pub max_newton: usize,
    /// Backtracking factor of the line search.
    pub backtrack: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Positivity floor `ε_pos φ₁`.
    pub eps_pos: f64,
    /// Relaxation θ of the fixed-point iteration.
    pub theta: f64,
    pub max_fixed_point: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rtol: 1e-10,
            step_tol: 1e-12,
            max_newton: 200,
            backtrack: 0.5,
            armijo: 1e-4,
            eps_pos: 1e-12,
            theta: 1.0,
            max_fixed_point: 500,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.rtol,
            self.step_tol,
            self.backtrack,
            self.armijo,
            self.eps_pos,
            self.theta,
        ];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite()))
            || self.max_newton == 0
            || self.max_fixed_point == 0
        {
            return Err(Error::InvalidSpec(
                "solver settings must be positive".into(),
            ));
        }
        if self.theta > 1.0 || self.backtrack >= 1.0 || self.armijo >= 0.5 {
            return Err(Error::InvalidSpec(
                "need theta <= 1, backtrack < 1 and armijo < 1/2".into(),
            ));
        }
        Ok(())
    }
}
