//! Meshes, discrete operators, and residual/Jacobian assembly.

mod assemble;
mod field;
mod grid;
mod ops;
mod radial;
mod transfer;

pub use assemble::{
    jacobian, residual, residual_frozen, residual_parts, residual_quasilinear, ResidualKind,
    ResidualParts,
};
pub use field::DiscreteField;
pub use grid::Grid2D;
pub use ops::{gradient_sq, laplacian, laplacian_matrix, radial_laplacian};
pub use radial::{RadialKind, RadialMesh};
pub use transfer::{coarsen, prolong, restrict};

use serde::{Deserialize, Serialize};

use crate::model::{DomainSpec, Point};
use crate::{Error, Result};

/// Mesh resolution requested by a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    /// Radial intervals `M`.
    #[serde(default = "default_intervals")]
    pub intervals: usize,
    #[serde(default = "default_side")]
    pub nx: usize,
    #[serde(default = "default_side")]
    pub ny: usize,
}

fn default_intervals() -> usize {
    400
}

fn default_side() -> usize {
    31
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            intervals: default_intervals(),
            nx: default_side(),
            ny: default_side(),
        }
    }
}

impl Resolution {
    pub fn radial(intervals: usize) -> Self {
        Resolution {
            intervals,
            ..Default::default()
        }
    }

    /// Halve the spacing.
    pub fn refined(&self) -> Self {
        Resolution {
            intervals: 2 * self.intervals,
            nx: 2 * self.nx + 1,
            ny: 2 * self.ny + 1,
        }
    }
}

/// A radial mesh or a rectangular grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mesh {
    Radial(RadialMesh),
    Grid(Grid2D),
}

impl Mesh {
    pub fn build(domain: &DomainSpec, res: &Resolution) -> Result<Self> {
        domain.validate()?;
        Ok(match *domain {
            DomainSpec::RadialBall { dimension, radius } => {
                Mesh::Radial(RadialMesh::ball(dimension, radius, res.intervals)?)
            }
            DomainSpec::RadialAnnulus {
                dimension,
                inner,
                outer,
            } => Mesh::Radial(RadialMesh::annulus(dimension, inner, outer, res.intervals)?),
            DomainSpec::Rectangle { lx, ly } => Mesh::Grid(Grid2D::new(lx, ly, res.nx, res.ny)?),
        })
    }

    pub fn radial(&self) -> Option<&RadialMesh> {
        match self {
            Mesh::Radial(m) => Some(m),
            Mesh::Grid(_) => None,
        }
    }

    pub fn refined(&self) -> Self {
        match self {
            Mesh::Radial(m) => Mesh::Radial(m.refined()),
            Mesh::Grid(g) => Mesh::Grid(g.refined()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Mesh::Radial(m) => m.node_count(),
            Mesh::Grid(g) => g.node_count(),
        }
    }

    /// Node indices carrying unknowns, in unknown order.
    pub fn unknowns(&self) -> Vec<usize> {
        match self {
            Mesh::Radial(m) => (m.first_unknown()..m.intervals).collect(),
            Mesh::Grid(g) => {
                let mut v = Vec::with_capacity(g.nx * g.ny);
                for j in 1..=g.ny {
                    for i in 1..=g.nx {
                        v.push(g.index(i, j));
                    }
                }
                v
            }
        }
    }

    pub fn unknown_count(&self) -> usize {
        match self {
            Mesh::Radial(m) => m.intervals - m.first_unknown(),
            Mesh::Grid(g) => g.nx * g.ny,
        }
    }

    pub fn is_unknown(&self, node: usize) -> bool {
        match self {
            Mesh::Radial(m) => node >= m.first_unknown() && node < m.intervals,
            Mesh::Grid(g) => {
                let (i, j) = g.ij(node);
                g.is_interior(i, j)
            }
        }
    }

    pub fn point(&self, node: usize) -> Point {
        match self {
            Mesh::Radial(m) => {
                let r = m.r(node);
                Point {
                    x: r,
                    y: 0.0,
                    rho: r,
                }
            }
            Mesh::Grid(g) => {
                let (i, j) = g.ij(node);
                let (x, y) = g.xy(i, j);
                let (cx, cy) = (0.5 * g.lx, 0.5 * g.ly);
                Point {
                    x,
                    y,
                    rho: (x - cx).hypot(y - cy),
                }
            }
        }
    }

    /// Smallest spacing.
    pub fn h_min(&self) -> f64 {
        match self {
            Mesh::Radial(m) => m.h,
            Mesh::Grid(g) => g.hx.min(g.hy),
        }
    }

    /// Dimension `N` of the underlying domain.
    pub fn dimension(&self) -> usize {
        match self {
            Mesh::Radial(m) => m.dimension,
            Mesh::Grid(_) => 2,
        }
    }

    /// Values at the unknown nodes.
    pub fn gather(&self, u: &DiscreteField) -> Vec<f64> {
        let v = u.values();
        self.unknowns().into_iter().map(|i| v[i]).collect()
    }

    /// Field with `x` at the unknown nodes and 0 on the boundary.
    pub fn scatter(&self, x: &[f64]) -> DiscreteField {
        let mut v = vec![0.0; self.node_count()];
        for (k, i) in self.unknowns().into_iter().enumerate() {
            v[i] = x[k];
        }
        DiscreteField::from_vec(v)
    }

    /// Trapezoid weights for `∫_Ω F dx` with nodal values of `F`.
    ///
    /// Radial meshes include the surface measure `|S^{N-1}| r^{N-1}`.
    pub fn quadrature_weights(&self) -> Vec<f64> {
        match self {
            Mesh::Radial(m) => {
                let area = sphere_area(m.dimension);
                (0..m.node_count())
                    .map(|i| {
                        let end = if i == 0 || i == m.intervals { 0.5 } else { 1.0 };
                        end * m.h * area * m.r(i).powi(m.dimension as i32 - 1)
                    })
                    .collect()
            }
            Mesh::Grid(g) => {
                let mut w = vec![0.0; g.node_count()];
                for j in 0..g.ny + 2 {
                    for i in 0..g.nx + 2 {
                        let ex = if i == 0 || i == g.nx + 1 { 0.5 } else { 1.0 };
                        let ey = if j == 0 || j == g.ny + 1 { 0.5 } else { 1.0 };
                        w[g.index(i, j)] = ex * ey * g.hx * g.hy;
                    }
                }
                w
            }
        }
    }

    /// Integral of a nodal field.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.quadrature_weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }

    /// Largest diagonal magnitude of Δ_h.
    pub fn laplacian_diag_max(&self) -> f64 {
        match self {
            Mesh::Radial(m) => {
                let h2 = m.h * m.h;
                match m.kind {
                    RadialKind::Ball => 2.0 * m.dimension as f64 / h2,
                    RadialKind::Annulus => 2.0 / h2,
                }
            }
            Mesh::Grid(g) => 2.0 / (g.hx * g.hx) + 2.0 / (g.hy * g.hy),
        }
    }
}

/// Surface area of the unit sphere `S^{N-1}`; `2` for `N = 1`.
pub fn sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    // |S^{N-1}| = 2 π^{N/2} / Γ(N/2), with Γ at half-integers by recursion
    let half = n as f64 / 2.0;
    let mut gamma = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut x = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < half - 1e-12 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(half) / gamma
}

pub(crate) fn check_radial(mesh: &Mesh) -> Result<&RadialMesh> {
    mesh.radial()
        .ok_or_else(|| Error::InvalidSpec("operation needs a radial mesh".into()))
}
