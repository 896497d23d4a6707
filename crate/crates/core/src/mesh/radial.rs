//! Uniform radial meshes on balls and annuli.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialKind {
    /// `r₀ = 0` with the symmetry condition at the centre.
    Ball,
    /// Dirichlet conditions at both ends.
    Annulus,
}

/// Nodes `r₀ < r₁ < … < r_M` with uniform spacing `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialMesh {
    pub dimension: usize,
    pub kind: RadialKind,
    pub r0: f64,
    pub r1: f64,
    pub intervals: usize,
    pub h: f64,
}

pub const MIN_INTERVALS: usize = 16;

impl RadialMesh {
    pub fn ball(dimension: usize, radius: f64, intervals: usize) -> Result<Self> {
        if dimension < 3 {
            return Err(Error::InvalidDimension(dimension));
        }
        Self::build(dimension, RadialKind::Ball, 0.0, radius, intervals)
    }

    pub fn annulus(dimension: usize, inner: f64, outer: f64, intervals: usize) -> Result<Self> {
        if dimension < 3 {
            return Err(Error::InvalidDimension(dimension));
        }
        Self::build(dimension, RadialKind::Annulus, inner, outer, intervals)
    }

    /// One-dimensional interval `[a, b]` with Dirichlet ends (the `N = 1` stencil).
    pub fn interval(a: f64, b: f64, intervals: usize) -> Result<Self> {
        Self::build(1, RadialKind::Annulus, a, b, intervals)
    }

    fn build(
        dimension: usize,
        kind: RadialKind,
        r0: f64,
        r1: f64,
        intervals: usize,
    ) -> Result<Self> {
        if intervals < MIN_INTERVALS {
            return Err(Error::InvalidSpec(format!(
                "radial mesh needs at least {MIN_INTERVALS} intervals, got {intervals}"
            )));
        }
        if !(r0 >= 0.0 && r1 > r0 && r1.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "bad radial extent [{r0}, {r1}]"
            )));
        }
        Ok(RadialMesh {
            dimension,
            kind,
            r0,
            r1,
            intervals,
            h: (r1 - r0) / intervals as f64,
        })
    }

    /// Same extent with the spacing halved.
    pub fn refined(&self) -> Self {
        Self::build(
            self.dimension,
            self.kind,
            self.r0,
            self.r1,
            2 * self.intervals,
        )
        .unwrap()
    }

    pub fn r(&self, i: usize) -> f64 {
        if i == self.intervals {
            self.r1
        } else {
            self.r0 + i as f64 * self.h
        }
    }

    pub fn node_count(&self) -> usize {
        self.intervals + 1
    }

    /// First unknown node.
    pub fn first_unknown(&self) -> usize {
        match self.kind {
            RadialKind::Ball => 0,
            RadialKind::Annulus => 1,
        }
    }

    /// Tridiagonal coefficients of Δ_h at node `i`: (lower, diagonal, upper).
    pub fn stencil(&self, i: usize) -> (f64, f64, f64) {
        let h2 = self.h * self.h;
        let n = self.dimension as f64;
        if i == 0 && self.kind == RadialKind::Ball {
            return (0.0, -2.0 * n / h2, 2.0 * n / h2);
        }
        let c = (n - 1.0) / (2.0 * self.r(i) * self.h);
        (1.0 / h2 - c, -2.0 / h2, 1.0 / h2 + c)
    }
}
