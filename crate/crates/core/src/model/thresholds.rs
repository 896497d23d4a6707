//! Critical exponent and the three σ thresholds.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub two_star: f64,
    /// `(2* - 1 - p) / (2* - 2)`.
    pub sigma1: f64,
    /// `(N - (N - 2) p) / 2`.
    pub sigma2: f64,
    /// `(N + 1 - (N - 1) p) / 2`.
    pub sigma3: f64,
}

/// Critical Sobolev exponent `2N/(N-2)`.
pub fn two_star(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    let n = n as f64;
    Ok(2.0 * n / (n - 2.0))
}

pub fn thresholds(n: usize, p: f64) -> Result<Thresholds> {
    let ts = two_star(n)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "threshold exponent p = {p} must be >= 1"
        )));
    }
    let nf = n as f64;
    Ok(Thresholds {
        two_star: ts,
        sigma1: (ts - 1.0 - p) / (ts - 2.0),
        sigma2: (nf - (nf - 2.0) * p) / 2.0,
        sigma3: (nf + 1.0 - (nf - 1.0) * p) / 2.0,
    })
}
