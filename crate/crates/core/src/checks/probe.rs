//! Refinement probe for nonexistence: does `∫ h/u` blow up, or does the
//! solver stop converging, as the mesh is refined?

use std::fmt::Write;

use serde::Serialize;

use super::verdict::{CheckVerdict, CheckWitness};
use crate::mesh::{DiscreteField, ResidualKind};
use crate::mesh::{Mesh, Resolution};
use crate::model::{InnerRegion, MuFieldSpec, Point, ProblemSpec};
use crate::nonlinear::{fixed_point_k, initial_guess, Discretization, SolverConfig, Status};
use crate::{par, Error, Result};

pub const NAME: &str = "nonexistence-degeneration";
/// Growth of `I_h` per halving counted as divergence.
pub const GROWTH_FACTOR: f64 = 1.5;
pub const MIN_LEVELS: usize = 3;
pub const PROBE_HEADER: &str = "level,intervals,nx,ny,h,status,iterations,residual,i_h,min_outer";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeLevel {
    pub level: usize,
    pub resolution: Resolution,
    pub h: f64,
    pub status: Status,
    pub iterations: usize,
    pub residual: f64,
    /// `∫ h/u` by the mesh quadrature (NaN without a final iterate).
    pub i_h: f64,
    /// Minimum of `u` over the annulus between ω and halfway to the boundary.
    pub min_outer: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub levels: Vec<ProbeLevel>,
    /// Pass means degeneration was detected at every level.
    pub verdict: CheckVerdict,
    /// `max I_h / min I_h` over converged levels (NaN if fewer than two).
    pub i_h_spread: f64,
}

impl ProbeReport {
    pub fn degenerate(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(PROBE_HEADER);
        s.push('\n');
        for l in &self.levels {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                l.level,
                l.resolution.intervals,
                l.resolution.nx,
                l.resolution.ny,
                l.h,
                l.status,
                l.iterations,
                l.residual,
                l.i_h,
                l.min_outer
            )
            .unwrap();
        }
        s
    }
}

/// Interior nodes outside ω but no farther out than halfway to the boundary,
/// ω being the inner region of a piecewise μ (else the inner half of the domain).
fn outer_annulus(spec: &ProblemSpec) -> impl Fn(&Point) -> bool {
    let outer = spec.domain.outer_radius();
    let region = match spec.g.mu() {
        Some(MuFieldSpec::Piecewise { region, .. }) => *region,
        _ => InnerRegion::Ball {
            radius: 0.5 * outer,
        },
    };
    let reach = match region {
        InnerRegion::Ball { radius } => 0.5 * (radius + outer),
        InnerRegion::Box { .. } => 0.75 * outer,
    };
    move |p| !region.contains(p) && p.rho <= reach
}

fn measure(spec: &ProblemSpec, mesh: &Mesh, u: &DiscreteField) -> Result<(f64, f64)> {
    let source = spec.source.as_ref().expect("checked by caller");
    let annulus = outer_annulus(spec);
    let vals = u.values();
    let mut ratio = vec![0.0; mesh.node_count()];
    let mut min_outer = f64::INFINITY;
    for i in mesh.unknowns() {
        let p = mesh.point(i);
        let h = source.eval(&p)?;
        if h != 0.0 {
            ratio[i] = h / vals[i];
        }
        if annulus(&p) {
            min_outer = min_outer.min(vals[i]);
        }
    }
    Ok((mesh.integrate(&ratio), min_outer))
}

fn run_level(
    spec: &ProblemSpec,
    res: Resolution,
    level: usize,
    config: &SolverConfig,
) -> Result<ProbeLevel> {
    let disc = Discretization::new(&spec.domain, &res)?;
    let u0 = initial_guess(&disc, spec, ResidualKind::Quasilinear);
    let run = fixed_point_k(&disc, spec, &u0, config)?;
    let r = run.report;
    let (i_h, min_outer) = match &r.solution {
        Some(u) => measure(spec, &disc.mesh, u)?,
        None => (f64::NAN, f64::NAN),
    };
    Ok(ProbeLevel {
        level,
        resolution: res,
        h: disc.mesh.h_min(),
        status: r.status,
        iterations: r.iterations,
        residual: r.residual,
        i_h,
        min_outer,
    })
}

/// Solve by the fixed-point map on `levels` successive halvings of `base`
/// (concurrently) and decide whether the problem degenerates.
///
/// The verdict passes when every level either fails to converge or has
/// `I_h ≥ 1.5 ×` the previous (converged) level; the coarsest level
/// counts as degenerate only by non-convergence unless all later levels grow.
/// A zero source gives a trivial verdict without solving.
pub fn nonexistence_probe(
    spec: &ProblemSpec,
    base: &Resolution,
    levels: usize,
    config: &SolverConfig,
) -> Result<ProbeReport> {
    if levels < MIN_LEVELS {
        return Err(Error::InvalidSpec(format!(
            "the probe needs at least {MIN_LEVELS} refinement levels, got {levels}"
        )));
    }
    spec.validate()?;
    config.validate()?;
    if spec.source.as_ref().is_none_or(|s| s.is_zero()) {
        return Ok(ProbeReport {
            levels: Vec::new(),
            verdict: CheckVerdict::trivial(NAME, "h = 0: the zero function solves the problem"),
            i_h_spread: f64::NAN,
        });
    }
    let mut resolutions = vec![*base];
    for k in 1..levels {
        resolutions.push(resolutions[k - 1].refined());
    }
    let jobs: Vec<(usize, Resolution)> = resolutions.into_iter().enumerate().collect();
    let levels: Vec<ProbeLevel> = par::map(&jobs, |(k, res)| run_level(spec, *res, *k, config))
        .into_iter()
        .collect::<Result<_>>()?;
    let verdict = degeneration_verdict(&levels);
    let conv: Vec<f64> = levels
        .iter()
        .filter(|l| l.status.is_converged())
        .map(|l| l.i_h)
        .collect();
    let i_h_spread = if conv.len() >= 2 {
        let max = conv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = conv.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    } else {
        f64::NAN
    };
    Ok(ProbeReport {
        levels,
        verdict,
        i_h_spread,
    })
}

fn degeneration_verdict(levels: &[ProbeLevel]) -> CheckVerdict {
    // margin: smallest growth ratio minus 1.5 over consecutive converged pairs
    let mut margin = f64::INFINITY;
    for k in 0..levels.len() {
        let l = &levels[k];
        if !l.status.is_converged() {
            continue;
        }
        let grown = k > 0 && levels[k - 1].status.is_converged() && {
            let ratio = l.i_h / levels[k - 1].i_h;
            margin = margin.min(ratio - GROWTH_FACTOR);
            ratio >= GROWTH_FACTOR
        };
        // the coarsest converged level has nothing to grow from; the next level decides
        let base_ok = k == 0
            && levels
                .get(1)
                .is_some_and(|n| !n.status.is_converged() || n.i_h >= GROWTH_FACTOR * l.i_h);
        if !(grown || base_ok) {
            let m = if k > 0 && levels[k - 1].status.is_converged() {
                l.i_h / levels[k - 1].i_h - GROWTH_FACTOR
            } else {
                f64::NAN
            };
            return CheckVerdict::fail(NAME, CheckWitness::new("level", k as f64), m).with_note(
                format!(
                    "level {k} converged with I_h = {:.6e} without growth",
                    l.i_h
                ),
            );
        }
    }
    let note = if margin.is_finite() {
        "I_h grows under refinement".to_string()
    } else {
        "no level converged".to_string()
    };
    CheckVerdict::pass(NAME, if margin.is_finite() { margin } else { 0.0 }).with_note(note)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Outcome;
    use crate::model::{DomainSpec, GradientCoefSpec, NonlinearitySpec, SourceSpec};

    fn level(k: usize, status: Status, i_h: f64) -> ProbeLevel {
        ProbeLevel {
            level: k,
            resolution: Resolution::radial(100 << k),
            h: 0.01 / (1 << k) as f64,
            status,
            iterations: 1,
            residual: 0.0,
            i_h,
            min_outer: 0.1,
        }
    }

    #[test]
    fn verdict_logic() {
        let c = Status::Converged;
        let d = Status::Diverged;
        assert!(
            degeneration_verdict(&[level(0, d, 1.0), level(1, d, 1.0), level(2, d, 1.0)]).passed()
        );
        assert!(
            degeneration_verdict(&[level(0, c, 1.0), level(1, c, 1.6), level(2, c, 2.6)]).passed()
        );
        assert!(
            degeneration_verdict(&[level(0, c, 1.0), level(1, d, 1.0), level(2, d, 1.0)]).passed()
        );
        let v = degeneration_verdict(&[level(0, c, 1.0), level(1, c, 1.05), level(2, c, 1.1)]);
        assert!(v.failed());
        assert_eq!(v.witness.unwrap().value, 0.0);
        let v = degeneration_verdict(&[level(0, d, 1.0), level(1, c, 1.0), level(2, c, 3.0)]);
        assert_eq!(v.witness.unwrap().value, 1.0);
    }

    fn spec(source: Option<SourceSpec>) -> ProblemSpec {
        let mut s = ProblemSpec::new(
            DomainSpec::ball(3, 1.0),
            0.0,
            NonlinearitySpec::power(3.0),
            GradientCoefSpec::model(0.3, 1.0, 0.0),
        );
        s.source = source;
        s
    }

    #[test]
    fn zero_source_is_trivial() {
        let cfg = SolverConfig::default();
        let r = nonexistence_probe(&spec(None), &Resolution::radial(50), 3, &cfg).unwrap();
        assert_eq!(r.verdict.outcome, Outcome::Trivial);
        let z = Some(SourceSpec::Constant { value: 0.0 });
        let r = nonexistence_probe(&spec(z), &Resolution::radial(50), 3, &cfg).unwrap();
        assert_eq!(r.verdict.outcome, Outcome::Trivial);
    }

    #[test]
    fn too_few_levels_rejected() {
        let cfg = SolverConfig::default();
        assert!(nonexistence_probe(&spec(None), &Resolution::radial(50), 2, &cfg).is_err());
    }

    #[test]
    fn csv_has_one_row_per_level() {
        let src = Some(SourceSpec::Bump {
            radius: 0.25,
            amplitude: 10.0,
        });
        let r = nonexistence_probe(
            &spec(src),
            &Resolution::radial(64),
            3,
            &SolverConfig::default(),
        )
        .unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with(PROBE_HEADER));
    }
}
