//! Boundedness of the scaled norm `λ^{1/(p-1)} ‖u‖∞` along a λ-sweep.

use serde::Serialize;

use super::verdict::{CheckVerdict, CheckWitness};
use crate::model::ProblemSpec;
use crate::nonlinear::{continuation_lambda, Discretization, SolverConfig, SweepTable};
use crate::Result;

pub const NAME: &str = "apriori-scaled";
/// Allowed ratio of the largest scaled norm to the median.
pub const BOUND_FACTOR: f64 = 1.05;

#[derive(Debug, Clone, Serialize)]
pub struct AprioriSweep {
    pub table: SweepTable,
    pub verdict: CheckVerdict,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Run [`continuation_lambda`] over `lambdas` and test
/// `max scaled ≤ 1.05 · median scaled`.
///
/// A point that did not converge fails the verdict with that λ as witness.
/// The margin is `1.05 − max/median`.
pub fn apriori_scaled_sweep(
    disc: &Discretization,
    spec: &ProblemSpec,
    lambdas: &[f64],
    config: &SolverConfig,
) -> Result<AprioriSweep> {
    let table = continuation_lambda(disc, spec, lambdas, config)?;
    let verdict = verdict_for(&table);
    Ok(AprioriSweep { table, verdict })
}

fn verdict_for(table: &SweepTable) -> CheckVerdict {
    if table.rows.is_empty() {
        return CheckVerdict::trivial(NAME, "empty grid");
    }
    if let Some(r) = table.rows.iter().find(|r| !r.status.is_converged()) {
        return CheckVerdict::fail(NAME, CheckWitness::new("lambda", r.param), f64::NAN)
            .with_note(format!("no converged solution ({})", r.status));
    }
    let mut scaled: Vec<f64> = table.rows.iter().map(|r| r.scaled_norm).collect();
    scaled.sort_by(f64::total_cmp);
    let med = median(&scaled);
    let (arg, max) = table.rows.iter().map(|r| (r.param, r.scaled_norm)).fold(
        (f64::NAN, f64::NEG_INFINITY),
        |a, b| if b.1 > a.1 { b } else { a },
    );
    let ratio = max / med;
    let margin = BOUND_FACTOR - ratio;
    let note = format!("max/median = {ratio:.12e}");
    if margin >= 0.0 {
        CheckVerdict::pass(NAME, margin).with_note(note)
    } else {
        CheckVerdict::fail(NAME, CheckWitness::new("lambda", arg), margin).with_note(note)
    }
}
