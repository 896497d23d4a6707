//! Reduction of constant-weight model problems to semilinear ones.
//!
//! With `v = ψ(u)` the equation `-Δu + μ/(u+δ)^γ |∇u|² = R(u)` becomes
//! `-Δv = φ(v)` with `φ(ψ(s)) = ψ'(s) R(s)`.

use serde::Serialize;

use super::map::{FieldMap, TransformMeta, TransformedProblem};
use super::psi::{psi_on_grid, PsiParams};
use super::sample::{geometric_nodes, hermite_table, tail_exponent};
use crate::mesh::{laplacian, DiscreteField, Mesh, RadialKind};
use crate::model::{FVariant, GVariant, GradientCoefSpec, NonlinearitySpec, Point, ProblemSpec};
use crate::{Error, Result};

/// Relative width of the boundary band left out of `interior_defect`.
pub const INTERIOR_BAND: f64 = 0.1;

const S_LO: f64 = 1e-9;
const S_HI: f64 = 1e6;

/// `(μ, δ, γ)` of a model coefficient with constant weight.
pub(crate) fn model_parameters(g: &GradientCoefSpec) -> Result<(f64, f64, f64)> {
    match &g.variant {
        GVariant::ModelSingular { mu, gamma } => match mu.as_constant() {
            Some(m) => Ok((m, g.delta, *gamma)),
            None => Err(Error::UnsupportedTransform(
                "the weight μ(x) is not constant, so no change of unknown removes the gradient term".into(),
            )),
        },
        GVariant::ConstantOverS { value } => Ok((*value, 0.0, 1.0)),
        GVariant::Table { .. } => Err(Error::UnsupportedTransform(
            "tabulated g has no closed-form change of unknown".into(),
        )),
    }
}

pub(crate) fn origin() -> Point {
    Point {
        x: 0.0,
        y: 0.0,
        rho: 0.0,
    }
}

/// Replace the model problem by `-Δv = φ(v)` with `v = ψ(u)`.
pub fn semilinearize(spec: &ProblemSpec) -> Result<TransformedProblem> {
    spec.validate()?;
    if spec.source.as_ref().is_some_and(|h| !h.is_zero()) {
        return Err(Error::UnsupportedTransform(
            "an x-dependent source does not survive the change of unknown".into(),
        ));
    }
    let (mu, delta, gamma) = model_parameters(&spec.g)?;
    let mut meta = TransformMeta::named("semilinearize");
    meta.mu = Some(mu);
    meta.delta = Some(delta);
    meta.gamma = Some(gamma);
    if mu == 0.0 {
        return Ok(TransformedProblem {
            spec: spec.clone(),
            map: FieldMap::Identity,
            transform: meta,
        });
    }
    let params = PsiParams::new(mu, delta, gamma);
    params.validate()?;
    let hi = S_HI.min(spec.f.support_end());
    let s_nodes = geometric_nodes(S_LO.min(0.5 * hi), hi);
    let psi = psi_on_grid(&params, &s_nodes)?;
    let x0 = origin();
    let (mut t, mut y, mut d) = (Vec::new(), Vec::new(), Vec::new());
    for (&s, &tv) in s_nodes.iter().zip(&psi) {
        if let Some(&last) = t.last() {
            // ψ may saturate (μ > 1 with γ = 1); stop once it stops increasing
            if !(tv > last * (1.0 + 1e-13)) {
                break;
            }
        }
        let (r, dr) = spec.rhs_with_slope(&x0, s)?;
        let value = if r == 0.0 {
            0.0
        } else {
            params.derivative(s) * r
        };
        if !value.is_finite() {
            return Err(Error::UnsupportedTransform(
                "semilinearized nonlinearity is singular at zero".into(),
            ));
        }
        t.push(tv);
        y.push(value);
        d.push(dr - params.g(s) * r);
    }
    let exponent = tail_exponent(&t, &y);
    let table = hermite_table(t, y, d, None)?;
    let p = if exponent > 1.0 { exponent } else { spec.f.p };
    let f = NonlinearitySpec {
        variant: FVariant::Table { table },
        p,
        a: 1.0,
        limit: None,
        vanishes_at_zero: spec.f.vanishes_at_zero,
    };
    let mut new = ProblemSpec::new(spec.domain.clone(), 1.0, f, GradientCoefSpec::zero());
    new.sigma_t = spec.sigma_t;
    Ok(TransformedProblem {
        spec: new,
        map: FieldMap::Psi { params },
        transform: meta,
    })
}

/// Defect of the power substitution `v = c u^{1-μ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerDefect {
    pub c: f64,
    /// `(p-μ)/(1-μ)`.
    pub exponent: f64,
    /// `sup |-Δ_h v - v^exponent|` over the unknowns.
    pub defect: f64,
    /// The same supremum over nodes at least [`INTERIOR_BAND`] (relative to
    /// the inradius) away from the boundary.
    pub interior_defect: f64,
    #[serde(skip)]
    pub v: DiscreteField,
}

/// For `u` solving `-Δu + μ|∇u|²/u = λu^p`, measure how well
/// `v = c u^{1-μ}`, `c = ((1-μ)λ)^{(1-μ)/(p-1)}`, solves `-Δv = v^{(p-μ)/(1-μ)}`.
pub fn power_transform_check(
    mesh: &Mesh,
    u: &DiscreteField,
    mu: f64,
    lambda: f64,
    p: f64,
) -> Result<PowerDefect> {
    u.check(mesh)?;
    if !(mu < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "power transform needs mu < 1, got {mu}"
        )));
    }
    if !(lambda > 0.0 && p > 1.0) {
        return Err(Error::InvalidSpec(
            "power transform needs lambda > 0 and p > 1".into(),
        ));
    }
    let c = ((1.0 - mu) * lambda).powf((1.0 - mu) / (p - 1.0));
    let q = (p - mu) / (1.0 - mu);
    for (k, &s) in u.values().iter().enumerate() {
        if s < 0.0 {
            return Err(Error::Domain {
                node: Some(k),
                s,
                what: "negative value in power transform",
            });
        }
    }
    let v = u.map(|s| c * s.powf(1.0 - mu));
    let lap = laplacian(mesh, &v)?;
    let (mut defect, mut interior_defect) = (0.0f64, 0.0f64);
    let inradius = inradius(mesh);
    for k in mesh.unknowns() {
        let e = (-lap.values()[k] - v.values()[k].powf(q)).abs();
        defect = defect.max(e);
        if boundary_distance(mesh, k) >= INTERIOR_BAND * inradius {
            interior_defect = interior_defect.max(e);
        }
    }
    Ok(PowerDefect {
        c,
        exponent: q,
        defect,
        interior_defect,
        v,
    })
}

fn inradius(mesh: &Mesh) -> f64 {
    match mesh {
        Mesh::Radial(m) if m.kind == RadialKind::Ball => m.r1,
        Mesh::Radial(m) => 0.5 * (m.r1 - m.r0),
        Mesh::Grid(g) => 0.5 * g.lx.min(g.ly),
    }
}

fn boundary_distance(mesh: &Mesh, node: usize) -> f64 {
    match mesh {
        Mesh::Radial(m) => {
            let r = m.r(node);
            if m.kind == RadialKind::Ball {
                m.r1 - r
            } else {
                (r - m.r0).min(m.r1 - r)
            }
        }
        Mesh::Grid(g) => {
            let (i, j) = g.ij(node);
            let (x, y) = g.xy(i, j);
            x.min(g.lx - x).min(y).min(g.ly - y)
        }
    }
}
