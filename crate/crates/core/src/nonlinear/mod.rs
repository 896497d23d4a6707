//! Damped Newton, the fixed-point map `K`, and continuation in λ and t.

mod config;
mod continuation;
mod fixed_point;
mod newton;
mod report;

pub use config::SolverConfig;
pub use continuation::{
    continuation_lambda, continuation_t, SweepParam, SweepRow, SweepTable, TSweep, GUESS_MULTIPLES,
    SWEEP_HEADER,
};
pub use fixed_point::{fixed_point_k, FixedPointRun};
pub use newton::{guess_amplitude, initial_guess, newton_solve, solve, solve_from_multiple};
pub use report::{SolveReport, Status};

use crate::linalg::{principal_eigenpair, EigenPair};
use crate::mesh::{Mesh, Resolution};
use crate::model::DomainSpec;
use crate::Result;

/// A mesh together with its principal eigenpair, shared by every solve on that mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: Mesh,
    pub eigen: EigenPair,
}

impl Discretization {
    pub fn new(domain: &DomainSpec, resolution: &Resolution) -> Result<Self> {
        Self::from_mesh(Mesh::build(domain, resolution)?)
    }

    pub fn from_mesh(mesh: Mesh) -> Result<Self> {
        let eigen = principal_eigenpair(&mesh)?;
        Ok(Discretization { mesh, eigen })
    }

    pub fn refined(&self) -> Result<Self> {
        Self::from_mesh(self.mesh.refined())
    }

    /// `ε φ₁` at the unknowns.
    pub(crate) fn floor(&self, eps: f64) -> Vec<f64> {
        self.mesh
            .gather(&self.eigen.phi)
            .into_iter()
            .map(|p| eps * p)
            .collect()
    }
}
