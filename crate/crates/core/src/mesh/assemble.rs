//! Residual and Jacobian of `-Δu + g(x,u)|∇u|² - rhs(x,u)` over the unknowns.
//!
//! Assembly is sequential: one solve stays on one thread, parallelism lives
//! one level up (sweeps, refinement levels, trials).

use super::ops::central_gradient;
use super::{laplacian, laplacian_matrix, DiscreteField, Mesh};
use crate::linalg::{CsrMatrix, LinearOp};
use crate::model::ProblemSpec;
use crate::Result;

/// Which nonlinear map the residual represents.
#[derive(Debug, Clone, Copy)]
pub enum ResidualKind<'a> {
    /// The problem itself.
    Quasilinear,
    /// The linearized-in-coefficients map used by the fixed-point operator:
    /// coefficient `(v+δ) g(x,v) / (u+δ)` and right-hand side evaluated at `v`.
    Frozen(&'a DiscreteField),
}

/// Pointwise terms: coefficient, its `u`-slope, right-hand side, its `u`-slope.
struct Local {
    coef: f64,
    dcoef: f64,
    rhs: f64,
    drhs: f64,
}

fn local(
    spec: &ProblemSpec,
    mesh: &Mesh,
    kind: ResidualKind,
    node: usize,
    s: f64,
) -> Result<Local> {
    let x = mesh.point(node);
    let l = match kind {
        ResidualKind::Quasilinear => {
            let (coef, dcoef) = if spec.g.is_zero() {
                (0.0, 0.0)
            } else {
                spec.g.eval_with_slope(&x, s)?
            };
            let (rhs, drhs) = spec.rhs_with_slope(&x, s)?;
            Local {
                coef,
                dcoef,
                rhs,
                drhs,
            }
        }
        ResidualKind::Frozen(v) => {
            let vi = v.values()[node];
            let (coef, dcoef) = if spec.g.is_zero() {
                (0.0, 0.0)
            } else {
                let c = spec.g.eval_sg(&x, vi)?;
                let base = s + spec.g.delta;
                if !(base > 0.0) {
                    return Err(crate::Error::Domain {
                        node: None,
                        s,
                        what: "frozen coefficient at nonpositive argument",
                    });
                }
                (c / base, -c / (base * base))
            };
            let (rhs, _) = spec.rhs_with_slope(&x, vi)?;
            Local {
                coef,
                dcoef,
                rhs,
                drhs: 0.0,
            }
        }
    };
    Ok(l)
}

fn check(mesh: &Mesh, u: &DiscreteField, kind: ResidualKind) -> Result<()> {
    u.check(mesh)?;
    if let ResidualKind::Frozen(v) = kind {
        v.check(mesh)?;
    }
    Ok(())
}

/// The three terms of the residual at the unknowns, in unknown order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualParts {
    /// `F = -Δ_h u + g |∇_h u|² - rhs`.
    pub residual: Vec<f64>,
    /// `Δ_h u`.
    pub laplacian: Vec<f64>,
    /// `g |∇_h u|²` (frozen coefficient for the frozen kind).
    pub gradient_term: Vec<f64>,
    pub rhs: Vec<f64>,
}

pub fn residual_parts(
    spec: &ProblemSpec,
    mesh: &Mesh,
    u: &DiscreteField,
    kind: ResidualKind,
) -> Result<ResidualParts> {
    check(mesh, u, kind)?;
    let lap = laplacian(mesh, u)?;
    let nodes = mesh.unknowns();
    let v = u.values();
    let n = nodes.len();
    let mut parts = ResidualParts {
        residual: Vec::with_capacity(n),
        laplacian: Vec::with_capacity(n),
        gradient_term: Vec::with_capacity(n),
        rhs: Vec::with_capacity(n),
    };
    for &i in &nodes {
        let t = local(spec, mesh, kind, i, v[i]).map_err(|e| e.at_node(i))?;
        let grad = if t.coef == 0.0 {
            0.0
        } else {
            let d = central_gradient(mesh, v, i);
            t.coef * (d[0] * d[0] + d[1] * d[1])
        };
        let l = lap.values()[i];
        parts.residual.push(-l + grad - t.rhs);
        parts.laplacian.push(l);
        parts.gradient_term.push(grad);
        parts.rhs.push(t.rhs);
    }
    Ok(parts)
}

/// Residual at the unknowns, in unknown order.
pub fn residual(
    spec: &ProblemSpec,
    mesh: &Mesh,
    u: &DiscreteField,
    kind: ResidualKind,
) -> Result<Vec<f64>> {
    residual_parts(spec, mesh, u, kind).map(|p| p.residual)
}

pub fn residual_quasilinear(
    spec: &ProblemSpec,
    mesh: &Mesh,
    u: &DiscreteField,
) -> Result<Vec<f64>> {
    residual(spec, mesh, u, ResidualKind::Quasilinear)
}

pub fn residual_frozen(
    spec: &ProblemSpec,
    mesh: &Mesh,
    u: &DiscreteField,
    v: &DiscreteField,
) -> Result<Vec<f64>> {
    residual(spec, mesh, u, ResidualKind::Frozen(v))
}

/// Jacobian of [`residual`] with respect to the unknowns.
pub fn jacobian(
    spec: &ProblemSpec,
    mesh: &Mesh,
    u: &DiscreteField,
    kind: ResidualKind,
) -> Result<LinearOp> {
    check(mesh, u, kind)?;
    let v = u.values();
    let nodes = mesh.unknowns();
    let terms: Vec<(f64, [f64; 2], Local)> = nodes
        .iter()
        .map(|&i| {
            let t = local(spec, mesh, kind, i, v[i]).map_err(|e| e.at_node(i))?;
            let d = central_gradient(mesh, v, i);
            Ok((d[0] * d[0] + d[1] * d[1], d, t))
        })
        .collect::<Result<_>>()?;
    let mut op = laplacian_matrix(mesh);
    match (&mut op, mesh) {
        (LinearOp::Tridiagonal(a), Mesh::Radial(m)) => {
            let n = a.dim();
            for (k, (grad, d, t)) in terms.iter().enumerate() {
                a.diag[k] += t.dcoef * grad - t.drhs;
                let c = t.coef * d[0] / m.h;
                if k > 0 {
                    a.lower[k] -= c;
                }
                if k + 1 < n {
                    a.upper[k] += c;
                }
            }
        }
        (LinearOp::Sparse(a), Mesh::Grid(g)) => {
            let nx = g.nx;
            let mut b = CsrMatrix::with_capacity(a.n, a.vals.len());
            let mut row = Vec::with_capacity(5);
            for (k, (grad, d, t)) in terms.iter().enumerate() {
                row.clear();
                let (cx, cy) = (t.coef * d[0] / g.hx, t.coef * d[1] / g.hy);
                for idx in a.row_ptr[k]..a.row_ptr[k + 1] {
                    let col = a.cols[idx];
                    let mut val = a.vals[idx];
                    if col == k {
                        val += t.dcoef * grad - t.drhs;
                    } else if col + 1 == k {
                        val -= cx;
                    } else if col == k + 1 {
                        val += cx;
                    } else if col + nx == k {
                        val -= cy;
                    } else if col == k + nx {
                        val += cy;
                    }
                    row.push((col, val));
                }
                b.push_row(&row);
            }
            *a = b;
        }
        _ => unreachable!("operator shape follows the mesh"),
    }
    Ok(op)
}
