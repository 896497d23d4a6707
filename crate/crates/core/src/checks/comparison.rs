//! Discrete comparison between a subsolution and a supersolution.

use super::verdict::{CheckVerdict, CheckWitness};
use crate::mesh::{residual_parts, DiscreteField, Mesh, ResidualKind};
use crate::model::{validate_spec, Condition, ProblemSpec};
use crate::Result;

pub const NAME: &str = "comparison";
/// Allowed excess of `u` over `v`.
pub const COMPARISON_TOL: f64 = 1e-10;

/// `-Δ_h w + g(x, w)|∇_h w|²` at the unknowns, with a rounding scale per node.
fn operator(spec: &ProblemSpec, mesh: &Mesh, w: &DiscreteField) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = residual_parts(spec, mesh, w, ResidualKind::Quasilinear)?;
    let val = p
        .laplacian
        .iter()
        .zip(&p.gradient_term)
        .map(|(l, g)| -l + g)
        .collect();
    let scale = p
        .laplacian
        .iter()
        .zip(&p.gradient_term)
        .map(|(l, g)| l.abs() + g.abs())
        .collect();
    Ok((val, scale))
}

/// Check `u ≤ v + 1e-10` for a pair with `A(u) ≤ h ≤ A(v)` node-wise, where
/// `A w = -Δ_h w + g(x,w)|∇_h w|²` uses the `g` of `spec`.
///
/// The pair and `g` (which must satisfy `s g ≤ σ < 1` and `s g` nondecreasing
/// on the sample grid) are checked first; if they fail, the verdict is
/// [`PreconditionViolated`](super::Outcome::PreconditionViolated).
pub fn comparison_check(
    spec: &ProblemSpec,
    mesh: &Mesh,
    u: &DiscreteField,
    v: &DiscreteField,
    h: &DiscreteField,
) -> Result<CheckVerdict> {
    for w in [u, v, h] {
        w.check(mesh)?;
    }
    let mut gspec = spec.clone();
    gspec.conditions = vec![Condition::GOne, Condition::GMonotone];
    let report = validate_spec(&gspec)?;
    for r in &report.results {
        if !r.satisfied {
            let s = r.witness.map_or(f64::NAN, |w| w.s);
            let note = format!(
                "g fails {}: {}",
                r.condition,
                r.note.clone().unwrap_or_default()
            );
            return Ok(CheckVerdict::precondition(
                NAME,
                CheckWitness::new("s", s),
                note,
            ));
        }
    }
    let nodes = mesh.unknowns();
    for (w, label) in [(u, "u"), (v, "v")] {
        if let Some(&k) = nodes.iter().find(|&&k| !(w.values()[k] > 0.0)) {
            return Ok(CheckVerdict::precondition(
                NAME,
                CheckWitness::at_node(k, w.values()[k]),
                format!("{label} is not positive"),
            ));
        }
    }
    let (au, su) = operator(spec, mesh, u)?;
    let (av, sv) = operator(spec, mesh, v)?;
    let slack = 64.0 * f64::EPSILON;
    for (j, &k) in nodes.iter().enumerate() {
        let hk = h.values()[k];
        if au[j] > hk + slack * (su[j] + hk.abs()) {
            return Ok(CheckVerdict::precondition(
                NAME,
                CheckWitness::at_node(k, au[j] - hk),
                "u is not a subsolution for h".into(),
            ));
        }
        if hk > av[j] + slack * (sv[j] + hk.abs()) {
            return Ok(CheckVerdict::precondition(
                NAME,
                CheckWitness::at_node(k, hk - av[j]),
                "v is not a supersolution for h".into(),
            ));
        }
    }
    let mut margin = f64::INFINITY;
    let mut worst = 0;
    for (k, (a, b)) in u.values().iter().zip(v.values()).enumerate() {
        if b - a < margin {
            margin = b - a;
            worst = k;
        }
    }
    Ok(if margin >= -COMPARISON_TOL {
        CheckVerdict::pass(NAME, margin)
    } else {
        CheckVerdict::fail(NAME, CheckWitness::at_node(worst, margin), margin)
    })
}
