//! Discrete Hölder seminorm.

use crate::mesh::{DiscreteField, Mesh};
use crate::{Error, Result};

/// Number of node pairs sampled on two-dimensional grids.
pub const GRID_PAIRS: usize = 100_000;

/// `max |u(x) - u(y)| / |x - y|^α` over node pairs.
///
/// Every pair is visited on radial meshes (in the radial variable). On grids
/// the pairs come from a four-dimensional Kronecker sequence, so the sample
/// is deterministic.
pub fn holder_quotient(u: &DiscreteField, mesh: &Mesh, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "Hölder exponent {alpha} must lie in (0, 1)"
        )));
    }
    u.check(mesh)?;
    let v = u.values();
    Ok(match mesh {
        Mesh::Radial(m) => {
            let n = m.node_count();
            let r: Vec<f64> = (0..n).map(|i| m.r(i)).collect();
            crate::par::max_range(n, |i| {
                let mut best = 0.0f64;
                for j in i + 1..n {
                    best = best.max((v[i] - v[j]).abs() / (r[j] - r[i]).powf(alpha));
                }
                best
            })
            .max(0.0)
        }
        Mesh::Grid(g) => {
            let (sx, sy) = (g.nx + 2, g.ny + 2);
            let a = kronecker_steps();
            let mut best = 0.0f64;
            for k in 1..=GRID_PAIRS {
                let t: Vec<f64> = a.iter().map(|a| (0.5 + a * k as f64).fract()).collect();
                let i1 = ((t[0] * sx as f64) as usize).min(sx - 1);
                let j1 = ((t[1] * sy as f64) as usize).min(sy - 1);
                let i2 = ((t[2] * sx as f64) as usize).min(sx - 1);
                let j2 = ((t[3] * sy as f64) as usize).min(sy - 1);
                if (i1, j1) == (i2, j2) {
                    continue;
                }
                let (x1, y1) = g.xy(i1, j1);
                let (x2, y2) = g.xy(i2, j2);
                let d = (x1 - x2).hypot(y1 - y2);
                let q = (v[g.index(i1, j1)] - v[g.index(i2, j2)]).abs() / d.powf(alpha);
                best = best.max(q);
            }
            best
        }
    })
}

/// Steps `φ_4^{-k}` of the generalized golden-ratio sequence in four dimensions.
fn kronecker_steps() -> [f64; 4] {
    // φ_4 is the positive root of x^5 = x + 1
    let mut x: f64 = 1.2;
    for _ in 0..60 {
        x = (1.0 + x).powf(0.2);
    }
    [1.0 / x, 1.0 / x.powi(2), 1.0 / x.powi(3), 1.0 / x.powi(4)]
}
