//! Principal Dirichlet eigenpair of `-Δ_h` by inverse power iteration.

use serde::{Deserialize, Serialize};

use crate::mesh::{laplacian_matrix, DiscreteField, Mesh};
use crate::{Error, Result};

const MAX_ITER: usize = 10_000;
const VECTOR_TOL: f64 = 1e-11;

/// `-Δ_h φ₁ = λ₁ φ₁`, `‖φ₁‖∞ = 1`, `φ₁ > 0` at interior nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub lambda1: f64,
    pub phi: DiscreteField,
    pub iterations: usize,
    /// `‖-Δ_h φ₁ - λ₁ φ₁‖∞`.
    pub residual: f64,
}

pub fn principal_eigenpair(mesh: &Mesh) -> Result<EigenPair> {
    let a = laplacian_matrix(mesh);
    let n = a.dim();
    let mut x = vec![1.0; n];
    let mut lam = f64::NAN;
    for it in 1..=MAX_ITER {
        let y = a.solve_with_tol(&x, 1e-14)?;
        let num: f64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
        let den: f64 = y.iter().map(|q| q * q).sum();
        let new = num / den;
        let sup = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sign = if y.iter().sum::<f64>() < 0.0 {
            -1.0
        } else {
            1.0
        };
        let next: Vec<f64> = y.iter().map(|v| sign * v / sup).collect();
        let step = next
            .iter()
            .zip(&x)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        x = next;
        // the Rayleigh quotient settles long before the vector does
        let done = (new - lam).abs() < 1e-12 * new.abs() && step < VECTOR_TOL;
        lam = new;
        if done {
            let mut ax = vec![0.0; n];
            a.apply(&x, &mut ax);
            let residual = ax
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - lam * q).abs())
                .fold(0.0, f64::max);
            return Ok(EigenPair {
                lambda1: lam,
                phi: mesh.scatter(&x),
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITER,
        residual: f64::NAN,
    })
}

/// Second-order Richardson extrapolation from spacings `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}
