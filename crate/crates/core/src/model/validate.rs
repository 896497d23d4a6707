//! Sampled checks of the structural conditions declared by a spec.
//!
//! Arguments `s` run over 161 log-spaced values in `[1e-8, 1e8]` (ten per
//! decade); points `x` are [`DomainSpec::sample_points`]. Table-defined
//! functions are only sampled inside their support.

use serde::{Deserialize, Serialize};

use super::domain::Point;
use super::problem::{Condition, ProblemSpec};
use super::thresholds::thresholds;
use crate::par;
use crate::Result;

const REL: f64 = 1e-12;

/// The sample grid for `s`.
pub fn s_grid() -> Vec<f64> {
    (0..=160)
        .map(|k| 10f64.powf(-8.0 + k as f64 / 10.0))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: [f64; 2],
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub condition: String,
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Smallest slack found (negative when violated).
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub results: Vec<ConditionResult>,
}

impl ValidationReport {
    pub fn all_satisfied(&self) -> bool {
        self.results.iter().all(|r| r.satisfied)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionResult> {
        self.results.iter().find(|r| r.condition == name)
    }
}

/// Test every effective condition of `spec` on the sample grid.
pub fn validate_spec(spec: &ProblemSpec) -> Result<ValidationReport> {
    spec.validate()?;
    let points = spec.domain.sample_points();
    let grid = s_grid();
    let mut results = Vec::new();
    for c in spec.effective_conditions() {
        results.push(check(spec, &c, &points, &grid)?);
    }
    Ok(ValidationReport { results })
}

struct Scan {
    margin: f64,
    witness: Option<Witness>,
}

impl Scan {
    fn new() -> Self {
        Scan {
            margin: f64::INFINITY,
            witness: None,
        }
    }

    fn push(&mut self, slack: f64, x: &Point, s: f64) {
        if slack < self.margin {
            self.margin = slack;
        }
        if slack < 0.0 && self.witness.is_none() {
            self.witness = Some(Witness { x: x.coords(), s });
        }
    }

    fn merge(mut self, other: Scan) -> Scan {
        self.margin = self.margin.min(other.margin);
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }

    fn finish(self, c: &Condition, note: Option<String>) -> ConditionResult {
        ConditionResult {
            condition: c.name().to_string(),
            satisfied: self.witness.is_none() && note.is_none(),
            witness: self.witness,
            margin: self.margin,
            note,
        }
    }
}

/// Scan `slack(x, s)` over points × grid, in order, in parallel across points.
fn scan_points<F>(points: &[Point], grid: &[f64], slack: F) -> Result<Scan>
where
    F: Fn(&Point, f64) -> Result<Option<f64>> + Sync + Send,
{
    let per_point: Vec<Result<Scan>> = par::map(points, |x| {
        let mut sc = Scan::new();
        for &s in grid {
            if let Some(v) = slack(x, s)? {
                sc.push(v, x, s);
            }
        }
        Ok(sc)
    });
    let mut total = Scan::new();
    for sc in per_point {
        total = total.merge(sc?);
    }
    Ok(total)
}

fn in_g_support(spec: &ProblemSpec, s: f64) -> bool {
    s >= spec.g.support_start()
        && s <= spec.g.support_end()
        && (s > spec.g.support_start() || s > 0.0)
}

fn check(
    spec: &ProblemSpec,
    c: &Condition,
    points: &[Point],
    grid: &[f64],
) -> Result<ConditionResult> {
    let f = &spec.f;
    let g = &spec.g;
    let delta = g.delta;
    let origin = [Point {
        x: 0.0,
        y: 0.0,
        rho: 0.0,
    }];
    let f_grid: Vec<f64> = grid
        .iter()
        .cloned()
        .filter(|&s| s <= f.support_end())
        .collect();
    let res = match c {
        Condition::FStar => scan_points(&origin, &f_grid, |_, s| {
            let v = f.eval(s)?;
            let lo = s.powf(f.p);
            let hi = f.a * (s + delta).powf(f.p);
            Ok(Some(((v - lo) / lo).min((hi - v) / hi) + REL))
        })?
        .finish(c, None),
        Condition::FInfinity => match f.limit {
            None => Scan::new().finish(c, Some("no limit declared".into())),
            Some(l) => scan_points(&origin, &f_grid, |_, s| {
                if s < 1e6 {
                    return Ok(None);
                }
                let q = f.eval(s)? / s.powf(f.p);
                Ok(Some(1e-3 - (q - l).abs() / l.abs().max(1e-300)))
            })?
            .finish(c, None),
        },
        Condition::FZero => scan_points(&origin, &f_grid, |_, s| {
            if s > 1e-6 {
                return Ok(None);
            }
            Ok(Some(1e-3 - f.eval(s)? / s))
        })?
        .finish(c, None),
        Condition::GStar => match (g.tau, g.sigma) {
            (Some(tau), Some(sigma)) => {
                let note = if !(2.0 * sigma - 1.0 < tau && tau <= sigma && sigma < 1.0) {
                    Some(format!(
                        "declared bounds violate 2σ-1 < τ <= σ < 1 (τ = {tau}, σ = {sigma})"
                    ))
                } else {
                    None
                };
                scan_points(points, grid, |x, s| {
                    if !in_g_support(spec, s) {
                        return Ok(None);
                    }
                    let sg = g.eval_sg(x, s)?;
                    let tol = REL * (1.0 + tau.abs().max(sigma.abs()));
                    Ok(Some((sg - tau).min(sigma - sg) + tol))
                })?
                .finish(c, note)
            }
            _ => Scan::new().finish(c, Some("bounds tau and sigma not declared".into())),
        },
        Condition::GInfinity => {
            let n = spec.domain.dimension();
            match thresholds(n, f.p) {
                Err(_) => Scan::new().finish(
                    c,
                    Some(format!("needs a radial domain with N >= 3 (N = {n})")),
                ),
                Ok(th) => {
                    let top = grid
                        .iter()
                        .cloned()
                        .filter(|&s| in_g_support(spec, s))
                        .fold(f64::NAN, f64::max);
                    scan_points(points, &[top], |x, s| {
                        if s.is_nan() {
                            return Ok(None);
                        }
                        Ok(Some(th.sigma1 - s * g.eval(x, s)?))
                    })?
                    .finish(c, None)
                }
            }
        }
        Condition::GOne => match g.sigma {
            Some(sigma) if sigma < 1.0 => scan_points(points, grid, |x, s| {
                if !in_g_support(spec, s) {
                    return Ok(None);
                }
                Ok(Some(sigma - s * g.eval(x, s)? + REL))
            })?
            .finish(c, None),
            Some(sigma) => {
                Scan::new().finish(c, Some(format!("declared sigma = {sigma} is not below 1")))
            }
            None => Scan::new().finish(c, Some("sigma not declared".into())),
        },
        Condition::GMonotone => {
            let per: Vec<Result<Scan>> = par::map(points, |x| {
                let mut sc = Scan::new();
                let mut prev: Option<f64> = None;
                for &s in grid {
                    if !in_g_support(spec, s) {
                        continue;
                    }
                    let v = s * g.eval(x, s)?;
                    if let Some(p) = prev {
                        sc.push(v - p + REL * (1.0 + p.abs()), x, s);
                    }
                    prev = Some(v);
                }
                Ok(sc)
            });
            let mut total = Scan::new();
            for sc in per {
                total = total.merge(sc?);
            }
            total.finish(c, None)
        }
        Condition::GTwo { tau, s0 } => {
            let region = match g.mu() {
                Some(crate::model::MuFieldSpec::Piecewise { region, .. }) => Some(*region),
                _ => None,
            };
            let outside: Vec<Point> = points
                .iter()
                .filter(|p| region.as_ref().is_none_or(|r| !r.contains(p)))
                .cloned()
                .collect();
            scan_points(&outside, grid, |x, s| {
                if s >= *s0 || !in_g_support(spec, s) {
                    return Ok(None);
                }
                Ok(Some(s * g.eval(x, s)? - tau + REL))
            })?
            .finish(c, None)
        }
        Condition::GMajorant => match &g.majorant {
            None => Scan::new().finish(c, Some("no majorant declared".into())),
            Some(big) => scan_points(points, grid, |x, s| {
                if s < big.start() || s > big.support_end() || !in_g_support(spec, s) {
                    return Ok(None);
                }
                let v = g.eval(x, s)?;
                let m = big.eval(s)?;
                Ok(Some(v.min(m - v) + REL * (1.0 + m.abs())))
            })?
            .finish(c, None),
        },
        Condition::GNonnegative => scan_points(points, grid, |x, s| {
            if !in_g_support(spec, s) {
                return Ok(None);
            }
            Ok(Some(g.eval(x, s)?))
        })?
        .finish(c, None),
    };
    Ok(res)
}
