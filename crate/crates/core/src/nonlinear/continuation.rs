//! Warm-started parameter sweeps.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{
    newton_solve, solve, solve_from_multiple, Discretization, SolveReport, SolverConfig, Status,
};
use crate::mesh::{DiscreteField, ResidualKind};
use crate::model::ProblemSpec;
use crate::{par, Error, Result};

/// CSV header of a sweep table.
pub const SWEEP_HEADER: &str = "param,sup_norm,scaled_norm,status,iterations,residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    Lambda,
    T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub sup_norm: f64,
    /// `λ^{1/(p-1)} ‖u‖∞`.
    pub scaled_norm: f64,
    pub status: Status,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub param: SweepParam,
    pub rows: Vec<SweepRow>,
    /// Full per-point reports, in grid order.
    #[serde(skip)]
    pub reports: Vec<SolveReport>,
}

impl SweepTable {
    fn new(param: SweepParam) -> Self {
        SweepTable {
            param,
            rows: Vec::new(),
            reports: Vec::new(),
        }
    }

    fn push(&mut self, param: f64, spec: &ProblemSpec, report: SolveReport) {
        let sup = if report.solution.is_some() {
            report.sup_norm
        } else {
            f64::NAN
        };
        self.rows.push(SweepRow {
            param,
            sup_norm: sup,
            scaled_norm: spec.scaled_norm(sup),
            status: report.status,
            iterations: report.iterations,
            residual: report.residual,
        });
        self.reports.push(report);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(SWEEP_HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.param, r.sup_norm, r.scaled_norm, r.status, r.iterations, r.residual
            )
            .unwrap();
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec(
            "sweep grid must be finite, nonnegative and strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Sweep λ upward, warm-starting each point from the previous solution.
///
/// The warm start is rescaled by `(λ_prev/λ)^{1/(p-1)}`, the exact amplitude
/// law of the power nonlinearity. When it fails, the point is retried from
/// the line-search guess with nested iteration. Failures are recorded and the sweep continues.
pub fn continuation_lambda(
    disc: &Discretization,
    spec: &ProblemSpec,
    grid: &[f64],
    config: &SolverConfig,
) -> Result<SweepTable> {
    check_grid(grid)?;
    spec.validate()?;
    config.validate()?;
    let mut table = SweepTable::new(SweepParam::Lambda);
    let mut prev: Option<(f64, DiscreteField)> = None;
    let p = spec.f.p;
    for &lambda in grid {
        let s = spec.with_lambda(lambda);
        let mut report = None;
        if let Some((lp, u)) = &prev {
            let c = if p > 1.0 && lambda > 0.0 && *lp > 0.0 {
                (lp / lambda).powf(1.0 / (p - 1.0))
            } else {
                1.0
            };
            let r = newton_solve(disc, &s, ResidualKind::Quasilinear, &u.scaled(c), config)?;
            if r.converged() {
                report = Some(r);
            }
        }
        let report = match report {
            Some(r) => r,
            None => solve(disc, &s, config)?,
        };
        if report.converged() {
            prev = Some((lambda, report.solution.clone().expect("converged")));
        }
        table.push(lambda, &s, report);
    }
    Ok(table)
}

/// Multiples of the line-search amplitude tried at every `t`.
pub const GUESS_MULTIPLES: [f64; 3] = [1.0, 0.1, 10.0];

/// Result of a sweep in `t`.
#[derive(Debug, Clone, Serialize)]
pub struct TSweep {
    pub table: SweepTable,
    /// First grid value at which every initial guess failed.
    pub t_fail: Option<f64>,
}

/// Sweep `t` upward at fixed λ.
///
/// Each point tries the previous solution and `c φ₁` for `c ∈ {1, 0.1, 10}·c₀`,
/// `c₀` the line-search amplitude (each with nested iteration), concurrently;
/// the first success in that order is kept. `t_fail` is the first point where all of them fail.
pub fn continuation_t(
    disc: &Discretization,
    spec: &ProblemSpec,
    grid: &[f64],
    config: &SolverConfig,
) -> Result<TSweep> {
    check_grid(grid)?;
    spec.validate()?;
    config.validate()?;
    let mut table = SweepTable::new(SweepParam::T);
    let mut t_fail = None;
    let mut prev: Option<DiscreteField> = None;
    for &t in grid {
        let s = spec.with_t(t);
        let mut starts: Vec<Option<f64>> = if prev.is_some() {
            vec![None]
        } else {
            Vec::new()
        };
        starts.extend(GUESS_MULTIPLES.iter().copied().map(Some));
        let reports = par::map(&starts, |start| match start {
            None => newton_solve(
                disc,
                &s,
                ResidualKind::Quasilinear,
                prev.as_ref().expect("warm start"),
                config,
            ),
            Some(k) => solve_from_multiple(disc, &s, *k, config),
        });
        let reports: Vec<SolveReport> = reports.into_iter().collect::<Result<_>>()?;
        let pick = reports.iter().position(|r| r.converged());
        let report = match pick {
            Some(i) => reports[i].clone(),
            None => {
                if t_fail.is_none() {
                    t_fail = Some(t);
                }
                reports[if prev.is_some() { 1 } else { 0 }].clone()
            }
        };
        prev = report
            .converged()
            .then(|| report.solution.clone().expect("converged"));
        table.push(t, &s, report);
    }
    Ok(TSweep { table, t_fail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Resolution;
    use crate::model::{DomainSpec, GradientCoefSpec, NonlinearitySpec};

    fn setup(m: usize) -> (Discretization, ProblemSpec) {
        let dom = DomainSpec::ball(3, 1.0);
        let d = Discretization::new(&dom, &Resolution::radial(m)).unwrap();
        let spec = ProblemSpec::new(
            dom,
            1.0,
            NonlinearitySpec::power(3.0),
            GradientCoefSpec::constant_over_s(0.4),
        );
        (d, spec)
    }

    #[test]
    fn empty_grid_gives_empty_table() {
        let (d, spec) = setup(100);
        let t = continuation_lambda(&d, &spec, &[], &SolverConfig::default()).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.to_csv(), format!("{SWEEP_HEADER}\n"));
    }

    #[test]
    fn rejects_unsorted_grid() {
        let (d, spec) = setup(100);
        assert!(continuation_lambda(&d, &spec, &[1.0, 0.5], &SolverConfig::default()).is_err());
    }

    #[test]
    fn t_zero_matches_plain_solve() {
        let (d, spec) = setup(200);
        let cfg = SolverConfig::default();
        let sw = continuation_t(&d, &spec, &[0.0, 0.01], &cfg).unwrap();
        let plain = continuation_lambda(&d, &spec, &[1.0], &cfg).unwrap();
        assert_eq!(sw.table.rows[0].status, Status::Converged);
        let a = sw.table.reports[0].solution.as_ref().unwrap();
        let b = plain.reports[0].solution.as_ref().unwrap();
        assert!(a.sup_distance(b) <= 1e-10 * b.sup_norm());
    }

    #[test]
    fn sweep_is_deterministic() {
        let (d, spec) = setup(150);
        let cfg = SolverConfig::default();
        let a = continuation_lambda(&d, &spec, &[0.5, 1.0, 2.0], &cfg)
            .unwrap()
            .to_csv();
        let b = continuation_lambda(&d, &spec, &[0.5, 1.0, 2.0], &cfg)
            .unwrap()
            .to_csv();
        assert_eq!(a, b);
    }
}
