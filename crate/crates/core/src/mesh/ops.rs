//! Discrete Laplacian and squared gradient.

use super::{DiscreteField, Grid2D, Mesh, RadialKind, RadialMesh};
use crate::linalg::{CsrMatrix, LinearOp, Tridiagonal};
use crate::Result;

/// `Δ_h u` at the unknown nodes of a radial mesh, indexed by node (boundary entries 0).
pub fn radial_laplacian(mesh: &RadialMesh, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; mesh.node_count()];
    for i in mesh.first_unknown()..mesh.intervals {
        let (lo, di, up) = mesh.stencil(i);
        let left = if i == 0 { 0.0 } else { lo * u[i - 1] };
        out[i] = left + di * u[i] + up * u[i + 1];
    }
    out
}

fn grid_laplacian(g: &Grid2D, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; g.node_count()];
    let (ax, ay) = (1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy));
    let s = g.stride();
    for j in 1..=g.ny {
        for i in 1..=g.nx {
            let k = g.index(i, j);
            out[k] =
                ax * (u[k - 1] - 2.0 * u[k] + u[k + 1]) + ay * (u[k - s] - 2.0 * u[k] + u[k + s]);
        }
    }
    out
}

/// `Δ_h u`, zero on boundary nodes.
pub fn laplacian(mesh: &Mesh, u: &DiscreteField) -> Result<DiscreteField> {
    u.check(mesh)?;
    Ok(DiscreteField::from_vec(match mesh {
        Mesh::Radial(m) => radial_laplacian(m, u.values()),
        Mesh::Grid(g) => grid_laplacian(g, u.values()),
    }))
}

/// Matrix of `-Δ_h` restricted to the unknowns.
pub fn laplacian_matrix(mesh: &Mesh) -> LinearOp {
    match mesh {
        Mesh::Radial(m) => {
            let first = m.first_unknown();
            let n = m.intervals - first;
            let (mut lo, mut di, mut up) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
            for k in 0..n {
                let (a, b, c) = m.stencil(k + first);
                lo[k] = -a;
                di[k] = -b;
                up[k] = -c;
            }
            lo[0] = 0.0;
            up[n - 1] = 0.0;
            LinearOp::Tridiagonal(Tridiagonal::new(lo, di, up))
        }
        Mesh::Grid(g) => {
            let (nx, ny) = (g.nx, g.ny);
            let (ax, ay) = (1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy));
            let mut a = CsrMatrix::with_capacity(nx * ny, 5 * nx * ny);
            let mut row = Vec::with_capacity(5);
            for j in 0..ny {
                for i in 0..nx {
                    let k = j * nx + i;
                    row.clear();
                    if j > 0 {
                        row.push((k - nx, -ay));
                    }
                    if i > 0 {
                        row.push((k - 1, -ax));
                    }
                    row.push((k, 2.0 * (ax + ay)));
                    if i + 1 < nx {
                        row.push((k + 1, -ax));
                    }
                    if j + 1 < ny {
                        row.push((k + nx, -ay));
                    }
                    a.push_row(&row);
                }
            }
            LinearOp::Sparse(a)
        }
    }
}

/// Central first differences at an unknown node: `(∂_x, ∂_y)` (radial: `(∂_r, 0)`).
pub(crate) fn central_gradient(mesh: &Mesh, u: &[f64], node: usize) -> [f64; 2] {
    match mesh {
        Mesh::Radial(m) => {
            if node == 0 && m.kind == RadialKind::Ball {
                [0.0, 0.0]
            } else {
                [(u[node + 1] - u[node - 1]) / (2.0 * m.h), 0.0]
            }
        }
        Mesh::Grid(g) => {
            let s = g.stride();
            [
                (u[node + 1] - u[node - 1]) / (2.0 * g.hx),
                (u[node + s] - u[node - s]) / (2.0 * g.hy),
            ]
        }
    }
}

/// Three-point difference along one axis: central inside, one-sided at the ends.
fn axis_diff(u: &[f64], k: usize, step: usize, pos: usize, last: usize, h: f64) -> f64 {
    if pos == 0 {
        (-3.0 * u[k] + 4.0 * u[k + step] - u[k + 2 * step]) / (2.0 * h)
    } else if pos == last {
        (3.0 * u[k] - 4.0 * u[k - step] + u[k - 2 * step]) / (2.0 * h)
    } else {
        (u[k + step] - u[k - step]) / (2.0 * h)
    }
}

/// `|∇_h u|²` at every node.
///
/// Central differences at interior nodes, zero at the centre of a ball,
/// three-point one-sided differences at boundary nodes.
pub fn gradient_sq(mesh: &Mesh, u: &DiscreteField) -> Result<DiscreteField> {
    u.check(mesh)?;
    let v = u.values();
    let out = match mesh {
        Mesh::Radial(m) => (0..m.node_count())
            .map(|i| {
                if i == 0 && m.kind == RadialKind::Ball {
                    0.0
                } else {
                    axis_diff(v, i, 1, i, m.intervals, m.h).powi(2)
                }
            })
            .collect(),
        Mesh::Grid(g) => (0..g.node_count())
            .map(|k| {
                let (i, j) = g.ij(k);
                let dx = axis_diff(v, k, 1, i, g.nx + 1, g.hx);
                let dy = axis_diff(v, k, g.stride(), j, g.ny + 1, g.hy);
                dx * dx + dy * dy
            })
            .collect(),
    };
    Ok(DiscreteField::from_vec(out))
}
