//! Direct banded and iterative Krylov solves, and the principal eigenpair.

mod banded;
mod eigen;
mod krylov;
mod sparse;
mod tridiag;

pub use banded::BandedSystem;
pub use eigen::{principal_eigenpair, richardson, EigenPair};
pub use krylov::{krylov_solve, KrylovSolution, Operator};
pub use sparse::CsrMatrix;
pub use tridiag::{tridiag_solve, Tridiagonal};

use crate::Result;

/// Relative tolerance for Krylov solves inside nonlinear iterations.
pub const KRYLOV_TOL: f64 = 1e-13;

/// A Jacobian or discrete operator over the unknowns of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearOp {
    /// Radial meshes.
    Tridiagonal(Tridiagonal),
    /// Rectangles (five-point pattern).
    Sparse(CsrMatrix),
}

impl LinearOp {
    pub fn dim(&self) -> usize {
        match self {
            LinearOp::Tridiagonal(t) => t.dim(),
            LinearOp::Sparse(c) => c.n,
        }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        match self {
            LinearOp::Tridiagonal(t) => t.apply(x, y),
            LinearOp::Sparse(c) => c.apply(x, y),
        }
    }

    /// Thomas algorithm in 1D, preconditioned BiCGStab in 2D.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solve_with_tol(rhs, KRYLOV_TOL)
    }

    pub fn solve_with_tol(&self, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
        match self {
            LinearOp::Tridiagonal(t) => tridiag_solve(t, rhs),
            LinearOp::Sparse(c) => krylov_solve(c, rhs, tol, 20 * c.n.max(50)).map(|s| s.x),
        }
    }

    /// Entry-wise dense copy; intended for small test systems.
    pub fn column(&self, j: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.dim()];
        e[j] = 1.0;
        let mut y = vec![0.0; self.dim()];
        self.apply(&e, &mut y);
        y
    }
}
