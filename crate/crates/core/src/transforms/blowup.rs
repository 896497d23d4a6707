//! Rescaling around the maximum: `v(y) = u(x* + η y)/‖u‖∞`, `η = ‖u‖∞^{-(p-1)/2}`.

use serde::{Deserialize, Serialize};

use crate::mesh::{DiscreteField, Grid2D, Mesh, RadialKind, RadialMesh};
use crate::{Error, Result};

/// Half width of the window in the rescaled variable.
pub const WINDOW_HALF_WIDTH: f64 = 2.0;
/// Samples per window axis (odd, so that `y = 0` is a sample).
pub const WINDOW_POINTS: usize = 41;

/// A rescaled profile sampled on `[-W, W]` (radial) or `[-W, W]²` (grids,
/// row-major with `y₂` outer).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupProfile {
    pub eta: f64,
    pub sup: f64,
    pub argmax: usize,
    pub center: [f64; 2],
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    /// Some window point fell outside the domain (zero-extended there).
    pub clipped: bool,
}

impl BlowupProfile {
    pub fn sup_distance(&self, other: &BlowupProfile) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Rescale `u` around its (lowest-index) maximum node.
pub fn blowup_rescale(u: &DiscreteField, mesh: &Mesh, p: f64) -> Result<BlowupProfile> {
    u.check(mesh)?;
    if !(p > 1.0) {
        return Err(Error::InvalidSpec(format!(
            "blow-up rescaling needs p > 1, got {p}"
        )));
    }
    let vals = u.values();
    let mut argmax = 0;
    for (k, v) in vals.iter().enumerate() {
        if *v > vals[argmax] {
            argmax = k;
        }
    }
    let sup = vals[argmax];
    if !(sup > 0.0 && sup.is_finite()) {
        return Err(Error::InvalidSpec(
            "blow-up rescaling needs a positive maximum".into(),
        ));
    }
    let eta = sup.powf(-(p - 1.0) / 2.0);
    let y: Vec<f64> = (0..WINDOW_POINTS)
        .map(|k| WINDOW_HALF_WIDTH * (2.0 * k as f64 / (WINDOW_POINTS - 1) as f64 - 1.0))
        .collect();
    // the middle sample sits exactly on the maximum node
    let mid = WINDOW_POINTS / 2;
    let mut clipped = false;
    let (center, values) = match mesh {
        Mesh::Radial(m) => {
            let r = m.r(argmax);
            let values = y
                .iter()
                .enumerate()
                .map(|(k, &yk)| {
                    if k == mid {
                        return 1.0;
                    }
                    let (v, inside) = radial_sample(m, vals, r + eta * yk);
                    clipped |= !inside;
                    v / sup
                })
                .collect();
            ([r, 0.0], values)
        }
        Mesh::Grid(g) => {
            let (i, j) = g.ij(argmax);
            let (cx, cy) = g.xy(i, j);
            let mut values = Vec::with_capacity(WINDOW_POINTS * WINDOW_POINTS);
            for (b, &yb) in y.iter().enumerate() {
                for (a, &ya) in y.iter().enumerate() {
                    if a == mid && b == mid {
                        values.push(1.0);
                        continue;
                    }
                    let (v, inside) = grid_sample(g, vals, cx + eta * ya, cy + eta * yb);
                    clipped |= !inside;
                    values.push(v / sup);
                }
            }
            ([cx, cy], values)
        }
    };
    Ok(BlowupProfile {
        eta,
        sup,
        argmax,
        center,
        y,
        values,
        clipped,
    })
}

fn radial_sample(m: &RadialMesh, u: &[f64], x: f64) -> (f64, bool) {
    // balls are even in r
    let r = if m.kind == RadialKind::Ball {
        x.abs()
    } else {
        x
    };
    if r < m.r0 || r > m.r1 {
        return (0.0, false);
    }
    let t = (r - m.r0) / m.h;
    let i = (t.floor() as usize).min(m.intervals - 1);
    let w = t - i as f64;
    ((1.0 - w) * u[i] + w * u[i + 1], true)
}

fn grid_sample(g: &Grid2D, u: &[f64], x: f64, y: f64) -> (f64, bool) {
    if x < 0.0 || x > g.lx || y < 0.0 || y > g.ly {
        return (0.0, false);
    }
    let (tx, ty) = (x / g.hx, y / g.hy);
    let i = (tx.floor() as usize).min(g.nx);
    let j = (ty.floor() as usize).min(g.ny);
    let (wx, wy) = (tx - i as f64, ty - j as f64);
    let v = (1.0 - wx) * (1.0 - wy) * u[g.index(i, j)]
        + wx * (1.0 - wy) * u[g.index(i + 1, j)]
        + (1.0 - wx) * wy * u[g.index(i, j + 1)]
        + wx * wy * u[g.index(i + 1, j + 1)];
    (v, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Resolution;
    use crate::model::DomainSpec;

    fn ball(m: usize) -> Mesh {
        Mesh::build(&DomainSpec::ball(3, 1.0), &Resolution::radial(m)).unwrap()
    }

    #[test]
    fn centre_value_is_one() {
        let mesh = ball(200);
        let u = DiscreteField::from_fn(&mesh, |p| 7.0 * (1.0 - p.rho * p.rho));
        let b = blowup_rescale(&u, &mesh, 3.0).unwrap();
        assert_eq!(b.values[WINDOW_POINTS / 2], 1.0);
        assert!((b.eta - 7f64.powf(-1.0)).abs() < 1e-15);
        assert!(b.values.iter().all(|v| *v <= 1.0 + 1e-15));
    }

    #[test]
    fn normalized_profile_is_unchanged() {
        let mesh = ball(400);
        let u = DiscreteField::from_fn(&mesh, |p| 1.0 - p.rho * p.rho);
        let b = blowup_rescale(&u, &mesh, 3.0).unwrap();
        assert_eq!(b.eta, 1.0);
        for (y, v) in b.y.iter().zip(&b.values) {
            let r = y.abs();
            let exact = if r <= 1.0 { 1.0 - r * r } else { 0.0 };
            assert!((v - exact).abs() < 1e-5, "{y}: {v}");
        }
        assert!(b.clipped);
    }

    #[test]
    fn ties_pick_the_lowest_index() {
        let mesh = ball(100);
        let u = DiscreteField::from_fn(&mesh, |p| {
            if p.rho < 0.5 {
                2.0
            } else {
                2.0 * (1.0 - p.rho) / 0.5
            }
        });
        let b = blowup_rescale(&u, &mesh, 2.0).unwrap();
        assert_eq!(b.argmax, 0);
    }

    #[test]
    fn grid_profile_centre_and_symmetry() {
        let mesh = Mesh::build(
            &DomainSpec::rectangle(1.0, 1.0),
            &Resolution {
                intervals: 0,
                nx: 31,
                ny: 31,
            },
        )
        .unwrap();
        let u = DiscreteField::from_fn(&mesh, |p| {
            40.0 * (std::f64::consts::PI * p.x).sin() * (std::f64::consts::PI * p.y).sin()
        });
        let b = blowup_rescale(&u, &mesh, 2.0).unwrap();
        let mid = WINDOW_POINTS / 2;
        assert_eq!(b.values[mid * WINDOW_POINTS + mid], 1.0);
        assert!(!b.clipped);
        let k = WINDOW_POINTS;
        for a in 0..k {
            let d = b.values[mid * k + a] - b.values[mid * k + (k - 1 - a)];
            assert!(d.abs() < 1e-12);
        }
    }
}
