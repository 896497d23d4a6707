//! Domains and evaluation points.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Bounded domain: a ball or annulus in R^N (radial solutions) or a rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    RadialBall {
        dimension: usize,
        radius: f64,
    },
    RadialAnnulus {
        dimension: usize,
        inner: f64,
        outer: f64,
    },
    Rectangle {
        lx: f64,
        ly: f64,
    },
}

impl DomainSpec {
    pub fn ball(dimension: usize, radius: f64) -> Self {
        DomainSpec::RadialBall { dimension, radius }
    }

    pub fn annulus(dimension: usize, inner: f64, outer: f64) -> Self {
        DomainSpec::RadialAnnulus {
            dimension,
            inner,
            outer,
        }
    }

    pub fn rectangle(lx: f64, ly: f64) -> Self {
        DomainSpec::Rectangle { lx, ly }
    }

    pub fn dimension(&self) -> usize {
        match self {
            DomainSpec::RadialBall { dimension, .. }
            | DomainSpec::RadialAnnulus { dimension, .. } => *dimension,
            DomainSpec::Rectangle { .. } => 2,
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self, DomainSpec::Rectangle { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::RadialBall { dimension, radius } => {
                if dimension < 3 {
                    return Err(Error::InvalidDimension(dimension));
                }
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidSpec(format!(
                        "ball radius {radius} must be positive"
                    )));
                }
            }
            DomainSpec::RadialAnnulus {
                dimension,
                inner,
                outer,
            } => {
                if dimension < 3 {
                    return Err(Error::InvalidDimension(dimension));
                }
                if !(inner >= 0.0 && inner < outer && outer.is_finite()) {
                    return Err(Error::InvalidSpec(format!(
                        "annulus radii must satisfy 0 <= a < R (a = {inner}, R = {outer})"
                    )));
                }
            }
            DomainSpec::Rectangle { lx, ly } => {
                if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
                    return Err(Error::InvalidSpec(
                        "rectangle sides must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Centre used for radial profiles and inner balls.
    pub fn center(&self) -> [f64; 2] {
        match *self {
            DomainSpec::Rectangle { lx, ly } => [0.5 * lx, 0.5 * ly],
            _ => [0.0, 0.0],
        }
    }

    /// Point at coordinates `(x, y)`; radial domains use `x = r`.
    pub fn point(&self, x: f64, y: f64) -> Point {
        let c = self.center();
        let rho = match self {
            DomainSpec::Rectangle { .. } => (x - c[0]).hypot(y - c[1]),
            _ => x.abs(),
        };
        Point { x, y, rho }
    }

    /// Deterministic interior sample used by condition checks.
    pub fn sample_points(&self) -> Vec<Point> {
        match *self {
            DomainSpec::RadialBall { radius, .. } => (0..64)
                .map(|i| self.point(radius * i as f64 / 64.0, 0.0))
                .collect(),
            DomainSpec::RadialAnnulus { inner, outer, .. } => (1..64)
                .map(|i| self.point(inner + (outer - inner) * i as f64 / 64.0, 0.0))
                .collect(),
            DomainSpec::Rectangle { lx, ly } => {
                let mut v = Vec::with_capacity(15 * 15);
                for j in 1..16 {
                    for i in 1..16 {
                        v.push(self.point(lx * i as f64 / 16.0, ly * j as f64 / 16.0));
                    }
                }
                v
            }
        }
    }

    /// Largest distance from the centre to the boundary.
    pub fn outer_radius(&self) -> f64 {
        match *self {
            DomainSpec::RadialBall { radius, .. } => radius,
            DomainSpec::RadialAnnulus { outer, .. } => outer,
            DomainSpec::Rectangle { lx, ly } => 0.5 * lx.min(ly),
        }
    }
}

/// A point of the domain. Radial meshes store the radius in `x` and set `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    /// Distance from the domain centre.
    pub rho: f64,
}

impl Point {
    pub fn coords(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}
