//! Monotonicity of `H(s) = ψ'(s) s^p / ψ(s)^{2*-1}`.
//!
//! `H` is decreasing exactly when `(p - s g(s)) ψ(s) < (2*-1) s ψ'(s)`.
//! Rescaling `x ↦ x/L` (the family `ψ_L`) and moving the anchor only multiply
//! `ψ` by constants, so both tests are run on `ψ` itself.

use serde::{Deserialize, Serialize};

use super::verdict::{CheckVerdict, CheckWitness};
use crate::model::{two_star, GVariant, GradientCoefSpec, Point};
use crate::quad::{simpson, TOL};
use crate::transforms::PsiParams;
use crate::{Error, Result};

pub const NAME: &str = "psi-decreasing";
/// Points of the default logarithmic grid.
pub const GRID_POINTS: usize = 1000;

/// The default grid: 1000 log-spaced points in `[1e-6, 1e6]`.
pub fn psi_grid() -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / (GRID_POINTS - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiCheckInput {
    pub g: GradientCoefSpec,
    /// Point at which `g` is frozen.
    pub x0: [f64; 2],
    pub p: f64,
    pub dimension: usize,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<f64>,
}

fn one() -> f64 {
    1.0
}

/// `ln ψ`, `ln ψ'` and `s g(s)` on the grid.
struct Profile {
    log_psi: Vec<f64>,
    log_dpsi: Vec<f64>,
    sg: Vec<f64>,
}

fn model_params(g: &GradientCoefSpec, x0: &Point) -> Result<Option<PsiParams>> {
    Ok(match &g.variant {
        GVariant::ModelSingular { mu, gamma } => {
            Some(PsiParams::new(mu.eval(x0)?, g.delta, *gamma))
        }
        GVariant::ConstantOverS { value } => Some(PsiParams::new(*value, 0.0, 1.0)),
        GVariant::Table { .. } => None,
    })
}

fn profile(g: &GradientCoefSpec, x0: &Point, grid: &[f64]) -> Result<Profile> {
    let sg = grid
        .iter()
        .map(|&s| Ok(s * g.eval(x0, s)?))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(params) = model_params(g, x0)? {
        if params.validate().is_ok() {
            let psi = psi_values(&params, grid)?;
            return Ok(Profile {
                log_psi: psi.iter().map(|v| v.ln()).collect(),
                log_dpsi: grid.iter().map(|&s| -params.inner(s)).collect(),
                sg,
            });
        }
    }
    generic_profile(g, x0, grid, sg)
}

fn psi_values(params: &PsiParams, grid: &[f64]) -> Result<Vec<f64>> {
    let mut nodes = Vec::with_capacity(grid.len() + 1);
    nodes.push(0.0);
    nodes.extend_from_slice(grid);
    let v = crate::transforms::psi_on_grid(params, &nodes)?;
    Ok(v[1..].to_vec())
}

/// Cell-wise quadrature in the log variable for tabulated or otherwise
/// general `g`; below the first grid point `ψ'` is treated as a power law.
fn generic_profile(
    g: &GradientCoefSpec,
    x0: &Point,
    grid: &[f64],
    sg: Vec<f64>,
) -> Result<Profile> {
    // ∫ g dr in the log variable: the integrand is s g(s) at s = e^x
    let gs = |x: f64| {
        let r = x.exp();
        g.eval(x0, r).map(|v| v * r).unwrap_or(f64::NAN)
    };
    let mut log_dpsi = Vec::with_capacity(grid.len());
    let mut psi = Vec::with_capacity(grid.len());
    let kappa = sg[0];
    if !(kappa < 1.0) {
        return Err(Error::Domain {
            node: None,
            s: grid[0],
            what: "psi not integrable at zero",
        });
    }
    log_dpsi.push(0.0);
    psi.push(grid[0] / (1.0 - kappa));
    for k in 1..grid.len() {
        let (a, b) = (grid[k - 1].ln(), grid[k].ln());
        let inner = simpson(&gs, a, b, TOL)?;
        let base = log_dpsi[k - 1];
        let outer = |x: f64| {
            let t = x.exp();
            let partial = simpson(&gs, a, x, TOL).unwrap_or(f64::NAN);
            t * (base - partial).exp()
        };
        let scale = psi[k - 1].max(1.0);
        let cell = simpson(&outer, a, b, TOL * scale)?;
        log_dpsi.push(base - inner);
        psi.push(psi[k - 1] + cell);
    }
    Ok(Profile {
        log_psi: psi.iter().map(|v| v.ln()).collect(),
        log_dpsi,
        sg,
    })
}

/// Test the decreasing property of `H` on `grid` (default [`psi_grid`]).
///
/// Fails at the first `s` where the equivalent inequality is violated or
/// `H` does not strictly decrease; the margin is the smallest relative slack
/// `1 - (p - s g) ψ / ((2*-1) s ψ')`.
pub fn check_psi_decreasing(input: &PsiCheckInput, grid: Option<&[f64]>) -> Result<CheckVerdict> {
    if !(input.scale > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "scale L = {} must be positive",
            input.scale
        )));
    }
    if !(input.p > 1.0) {
        return Err(Error::InvalidSpec(format!("p = {} must exceed 1", input.p)));
    }
    let q = two_star(input.dimension)? - 1.0;
    let default_grid;
    let grid = match grid {
        Some(g) => g,
        None => {
            default_grid = psi_grid();
            &default_grid
        }
    };
    let x0 = Point {
        x: input.x0[0],
        y: input.x0[1],
        rho: input.x0[0].hypot(input.x0[1]),
    };
    let mut g = input.g.clone();
    if let (Some(a), GVariant::ModelSingular { .. } | GVariant::ConstantOverS { .. }) =
        (input.anchor, &g.variant)
    {
        // only the admissibility of the anchor matters; it rescales ψ
        let params = model_params(&g, &x0)?.map(|p| p.with_anchor(a));
        if let Some(p) = params {
            p.validate()?;
        }
    }
    g.majorant = None;
    let prof = profile(&g, &x0, grid)?;
    let mut margin = f64::INFINITY;
    let mut prev_log_h = f64::INFINITY;
    for (k, &s) in grid.iter().enumerate() {
        // both sides divided by (2*-1) s ψ', in logs
        let ratio =
            (input.p - prof.sg[k]) * (prof.log_psi[k] - s.ln() - prof.log_dpsi[k]).exp() / q;
        let slack = 1.0 - ratio;
        margin = margin.min(slack);
        let log_h = prof.log_dpsi[k] + input.p * s.ln() - q * prof.log_psi[k];
        if !(slack > 0.0) || !(log_h < prev_log_h) {
            return Ok(CheckVerdict::fail(NAME, CheckWitness::new("s", s), slack));
        }
        prev_log_h = log_h;
    }
    Ok(CheckVerdict::pass(NAME, margin))
}

/// Exponent of `H(s) = c s^e` for `g = σ/s`: `e = p - σ - (1-σ)(2*-1)`.
pub fn constant_over_s_exponent(dimension: usize, p: f64, sigma: f64) -> Result<f64> {
    let q = two_star(dimension)? - 1.0;
    Ok(p - sigma - (1.0 - sigma) * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::thresholds;

    fn input(g: GradientCoefSpec, p: f64, n: usize) -> PsiCheckInput {
        PsiCheckInput {
            g,
            x0: [0.0, 0.0],
            p,
            dimension: n,
            scale: 1.0,
            anchor: None,
        }
    }

    #[test]
    fn flips_across_sigma_one() {
        for n in [3, 4, 5] {
            let t = thresholds(n, 2.0).unwrap();
            let below = check_psi_decreasing(
                &input(GradientCoefSpec::constant_over_s(t.sigma1 - 1e-3), 2.0, n),
                None,
            )
            .unwrap();
            let above = check_psi_decreasing(
                &input(GradientCoefSpec::constant_over_s(t.sigma1 + 1e-3), 2.0, n),
                None,
            )
            .unwrap();
            assert!(below.passed(), "{below:?}");
            assert!(above.failed());
            assert_eq!(above.witness.as_ref().unwrap().value, 1e-6);
        }
    }

    #[test]
    fn zero_g_subcritical_passes() {
        let v = check_psi_decreasing(&input(GradientCoefSpec::zero(), 3.0, 3), None).unwrap();
        assert!(v.passed());
        // H = s^{p-5}, so the slack is 1 - p/5 everywhere
        assert!((v.margin - 0.4).abs() < 1e-9, "{}", v.margin);
    }

    #[test]
    fn generic_path_agrees_with_closed_form() {
        // σ/s written as a table g with A = σ, shift 0, power 1
        let sigma = 0.3;
        let a = crate::model::Table::new(
            vec![0.0, 1.0],
            vec![sigma, sigma],
            crate::model::Tail::Constant,
        )
        .unwrap();
        let g = GradientCoefSpec {
            variant: GVariant::Table {
                mu: crate::model::MuFieldSpec::constant(1.0),
                shift: 0.0,
                power: 1.0,
                a,
                b: None,
            },
            ..GradientCoefSpec::constant_over_s(sigma)
        };
        let grid: Vec<f64> = (0..200)
            .map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / 199.0))
            .collect();
        let tab = check_psi_decreasing(&input(g, 3.0, 3), Some(&grid)).unwrap();
        let closed = check_psi_decreasing(
            &input(GradientCoefSpec::constant_over_s(sigma), 3.0, 3),
            Some(&grid),
        )
        .unwrap();
        assert_eq!(tab.outcome, closed.outcome);
        assert!(
            (tab.margin - closed.margin).abs() < 1e-8,
            "{} {}",
            tab.margin,
            closed.margin
        );
    }
}
