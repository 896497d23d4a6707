//! Nodal fields with homogeneous Dirichlet boundary values.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::Mesh;
use crate::{Error, Result};

/// One value per mesh node; boundary nodes hold 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteField {
    values: Vec<f64>,
}

impl DiscreteField {
    /// Wrap `values`, checking the length against `mesh`.
    pub fn new(mesh: &Mesh, values: Vec<f64>) -> Result<Self> {
        let f = DiscreteField { values };
        f.check(mesh)?;
        Ok(f)
    }

    pub fn zeros(mesh: &Mesh) -> Self {
        DiscreteField {
            values: vec![0.0; mesh.node_count()],
        }
    }

    /// Sample `f` at the unknown nodes; boundary nodes are set to 0.
    pub fn from_fn<F: Fn(&crate::model::Point) -> f64>(mesh: &Mesh, f: F) -> Self {
        let mut v = vec![0.0; mesh.node_count()];
        for i in mesh.unknowns() {
            v[i] = f(&mesh.point(i));
        }
        DiscreteField { values: v }
    }

    pub(crate) fn from_vec(values: Vec<f64>) -> Self {
        DiscreteField { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check(&self, mesh: &Mesh) -> Result<()> {
        if self.values.len() != mesh.node_count() {
            return Err(Error::MeshMismatch {
                expected: mesh.node_count(),
                got: self.values.len(),
            });
        }
        Ok(())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        DiscreteField {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        DiscreteField {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `sup |self - other|`.
    pub fn sup_distance(&self, other: &DiscreteField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Plain text dump: two columns `r u` on radial meshes, CSV `x,y,u` on grids.
    pub fn to_text(&self, mesh: &Mesh) -> Result<String> {
        self.check(mesh)?;
        let mut s = String::new();
        match mesh {
            Mesh::Radial(m) => {
                for (i, v) in self.values.iter().enumerate() {
                    writeln!(s, "{} {}", m.r(i), v).unwrap();
                }
            }
            Mesh::Grid(g) => {
                s.push_str("x,y,u\n");
                for (k, v) in self.values.iter().enumerate() {
                    let (i, j) = g.ij(k);
                    let (x, y) = g.xy(i, j);
                    writeln!(s, "{x},{y},{v}").unwrap();
                }
            }
        }
        Ok(s)
    }
}
