//! Uniform grids on rectangles.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rectangle `[0, lx] × [0, ly]` with `nx × ny` interior nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
}

pub const MIN_INTERIOR: usize = 8;

impl Grid2D {
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < MIN_INTERIOR || ny < MIN_INTERIOR {
            return Err(Error::InvalidSpec(format!(
                "grid needs at least {MIN_INTERIOR} interior nodes per direction, got {nx} x {ny}"
            )));
        }
        if !(lx > 0.0 && ly > 0.0) {
            return Err(Error::InvalidSpec(
                "rectangle sides must be positive".into(),
            ));
        }
        Ok(Grid2D {
            lx,
            ly,
            nx,
            ny,
            hx: lx / (nx + 1) as f64,
            hy: ly / (ny + 1) as f64,
        })
    }

    /// Same rectangle with both spacings halved.
    pub fn refined(&self) -> Self {
        Grid2D::new(self.lx, self.ly, 2 * self.nx + 1, 2 * self.ny + 1).unwrap()
    }

    /// Row length including the two boundary columns.
    pub fn stride(&self) -> usize {
        self.nx + 2
    }

    pub fn node_count(&self) -> usize {
        (self.nx + 2) * (self.ny + 2)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.stride() + i
    }

    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k % self.stride(), k / self.stride())
    }

    pub fn xy(&self, i: usize, j: usize) -> (f64, f64) {
        let x = if i == self.nx + 1 {
            self.lx
        } else {
            i as f64 * self.hx
        };
        let y = if j == self.ny + 1 {
            self.ly
        } else {
            j as f64 * self.hy
        };
        (x, y)
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= self.nx && j >= 1 && j <= self.ny
    }
}
