//! Outcome of a nonlinear solve.

use serde::{Deserialize, Serialize};

use crate::mesh::DiscreteField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    Diverged,
    MaxIterations,
    /// At least 1% of the interior nodes ended on the positivity floor.
    FloorDegenerate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Diverged => "diverged",
            Status::MaxIterations => "max-iterations",
            Status::FloorDegenerate => "floor-degenerate",
        }
    }

    pub fn is_converged(self) -> bool {
        self == Status::Converged
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Status,
    /// Last iterate; absent only when no admissible iterate was ever formed.
    pub solution: Option<DiscreteField>,
    pub iterations: usize,
    /// Sup norm of the residual at the last iterate.
    pub residual: f64,
    /// Absolute tolerance the residual was tested against.
    pub tolerance: f64,
    pub sup_norm: f64,
    /// `min_i u_i / φ₁,i` over interior nodes.
    pub positivity_margin: f64,
    /// Hölder quotient with exponent 1/2.
    pub holder_half: f64,
    /// Fraction of interior nodes sitting on the positivity floor.
    pub floor_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status.is_converged()
    }

    pub(crate) fn failed(status: Status, iterations: usize, message: String) -> Self {
        SolveReport {
            status,
            solution: None,
            iterations,
            residual: f64::INFINITY,
            tolerance: f64::NAN,
            sup_norm: f64::NAN,
            positivity_margin: f64::NAN,
            holder_half: f64::NAN,
            floor_fraction: f64::NAN,
            message: Some(message),
        }
    }
}
