//! Damped Newton with Armijo backtracking and a positivity floor.

use super::{Discretization, SolveReport, SolverConfig, Status};
use crate::checks::holder_quotient;
use crate::mesh::{
    coarsen, jacobian, prolong, residual_parts, DiscreteField, ResidualKind, ResidualParts,
};
use crate::model::ProblemSpec;
use crate::Result;

/// Steps smaller than this (relative to `‖u‖∞`) certify that Newton has
/// reached its quadratic regime.
const POLISHED_STEP: f64 = 1e-6;
/// Smallest line-search step before the iteration is declared stagnant.
const MIN_ALPHA: f64 = 1e-10;
/// Share of the distance to zero a single step may cover.
const BOUNDARY_FRACTION: f64 = 0.9;
/// Interior share of floor nodes that marks a degenerate run.
pub(crate) const FLOOR_SHARE: f64 = 0.01;

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Absolute residual tolerance at the current iterate.
///
/// Relative part: `rtol · max(‖rhs‖∞, ‖Δ_h u‖∞)`. Absolute part: the
/// rounding level of forming the residual, which dominates on fine meshes.
pub(crate) fn tolerance(parts: &ResidualParts, x: &[f64], diag_max: f64, rtol: f64) -> f64 {
    let scale = sup(&parts.rhs).max(sup(&parts.laplacian));
    let roundoff = 16.0 * f64::EPSILON * (sup(x) * diag_max + sup(&parts.gradient_term) + scale);
    (rtol * scale).max(roundoff)
}

/// Residual relative to the size of its terms; used to pick the amplitude of the first guess.
fn relative_residual(parts: &ResidualParts) -> f64 {
    let den = norm2(&parts.laplacian) + norm2(&parts.gradient_term) + norm2(&parts.rhs);
    if den == 0.0 {
        return f64::INFINITY;
    }
    norm2(&parts.residual) / den
}

/// `c φ₁` with `c` the best of 16 logarithmically spaced values in `[10⁻⁴, 10⁴]`,
/// judged by the relative residual.
pub fn initial_guess(
    disc: &Discretization,
    spec: &ProblemSpec,
    kind: ResidualKind,
) -> DiscreteField {
    disc.eigen.phi.scaled(guess_amplitude(disc, spec, kind))
}

/// The amplitude `c` chosen by [`initial_guess`]: the best point of the
/// coarse logarithmic scan, refined by golden-section search between its
/// neighbours.
pub fn guess_amplitude(disc: &Discretization, spec: &ProblemSpec, kind: ResidualKind) -> f64 {
    let score = |lc: f64| {
        let u = disc.eigen.phi.scaled(10f64.powf(lc));
        residual_parts(spec, &disc.mesh, &u, kind).map_or(f64::INFINITY, |p| relative_residual(&p))
    };
    let step = 8.0 / 15.0;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..16 {
        let lc = -4.0 + step * k as f64;
        let r = score(lc);
        if r < best.0 {
            best = (r, lc);
        }
    }
    if !best.0.is_finite() {
        return 1.0;
    }
    let (mut a, mut b) = (best.1 - step, best.1 + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (score(x1), score(x2));
    for _ in 0..40 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = score(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = score(x2);
        }
    }
    let (lc, r) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    10f64.powf(if r < best.0 { lc } else { best.1 })
}

/// Largest step in `(0, 1]` that keeps every unknown above a tenth of its current value.
fn max_step(x: &[f64], d: &[f64]) -> f64 {
    x.iter()
        .zip(d)
        .filter(|(_, d)| **d < 0.0)
        .map(|(x, d)| BOUNDARY_FRACTION * x / -d)
        .fold(1.0, f64::min)
}

fn clip(x: &mut [f64], floor: &[f64]) {
    for (v, f) in x.iter_mut().zip(floor) {
        if !(*v >= *f) {
            *v = *f;
        }
    }
}

/// Fraction of unknowns within rounding of the floor.
pub(crate) fn floor_fraction(x: &[f64], floor: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let on = x
        .iter()
        .zip(floor)
        .filter(|(v, f)| **v <= **f * (1.0 + 1e-9))
        .count();
    on as f64 / x.len() as f64
}

/// Fill the field-derived diagnostics of a report.
pub(crate) fn finish(
    disc: &Discretization,
    status: Status,
    x: &[f64],
    iterations: usize,
    residual: f64,
    tol: f64,
    floor: &[f64],
    message: Option<String>,
) -> SolveReport {
    let mesh = &disc.mesh;
    let phi = mesh.gather(&disc.eigen.phi);
    let margin = x
        .iter()
        .zip(&phi)
        .map(|(u, p)| u / p)
        .fold(f64::INFINITY, f64::min);
    let ff = floor_fraction(x, floor);
    let status = if ff >= FLOOR_SHARE {
        Status::FloorDegenerate
    } else {
        status
    };
    let u = mesh.scatter(x);
    SolveReport {
        status,
        iterations,
        residual,
        tolerance: tol,
        sup_norm: u.sup_norm(),
        positivity_margin: margin,
        holder_half: holder_quotient(&u, mesh, 0.5).unwrap_or(f64::NAN),
        floor_fraction: ff,
        solution: Some(u),
        message,
    }
}

/// Damped Newton on the quasilinear or frozen residual.
///
/// Errors are returned only for malformed input; every numerical outcome,
/// including domain violations during the iteration, is reported in the status.
pub fn newton_solve(
    disc: &Discretization,
    spec: &ProblemSpec,
    kind: ResidualKind,
    u0: &DiscreteField,
    config: &SolverConfig,
) -> Result<SolveReport> {
    let mesh = &disc.mesh;
    u0.check(mesh)?;
    if let ResidualKind::Frozen(v) = kind {
        v.check(mesh)?;
    }
    let floor = disc.floor(config.eps_pos);
    let diag_max = mesh.laplacian_diag_max();
    let eval = |x: &[f64]| residual_parts(spec, mesh, &mesh.scatter(x), kind);

    let mut x = mesh.gather(u0);
    clip(&mut x, &floor);
    let mut parts = match eval(&x) {
        Ok(p) => p,
        Err(e) => {
            return Ok(SolveReport::failed(
                Status::Diverged,
                0,
                format!("initial guess: {e}"),
            ))
        }
    };
    let merit_of = |f: &[f64]| 0.5 * norm2(f).powi(2);
    let mut merit = merit_of(&parts.residual);
    let mut step_rel = f64::INFINITY;
    let mut it = 0;
    loop {
        let norm = sup(&parts.residual);
        let tol = tolerance(&parts, &x, diag_max, config.rtol);
        if norm <= tol && step_rel <= POLISHED_STEP {
            return Ok(finish(
                disc,
                Status::Converged,
                &x,
                it,
                norm,
                tol,
                &floor,
                None,
            ));
        }
        if it == config.max_newton {
            return Ok(finish(
                disc,
                Status::MaxIterations,
                &x,
                it,
                norm,
                tol,
                &floor,
                None,
            ));
        }
        it += 1;
        let fail =
            |msg: String| finish(disc, Status::Diverged, &x, it, norm, tol, &floor, Some(msg));
        let j = match jacobian(spec, mesh, &mesh.scatter(&x), kind) {
            Ok(j) => j,
            Err(e) => return Ok(fail(format!("jacobian: {e}"))),
        };
        let neg: Vec<f64> = parts.residual.iter().map(|v| -v).collect();
        let d = match j.solve(&neg) {
            Ok(d) => d,
            Err(e) => return Ok(fail(format!("linear solve: {e}"))),
        };
        let mut alpha = max_step(&x, &d);
        let accepted = loop {
            let mut trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            clip(&mut trial, &floor);
            if let Ok(p) = eval(&trial) {
                let m = merit_of(&p.residual);
                if m.is_finite() && m <= (1.0 - 2.0 * config.armijo * alpha) * merit {
                    break Some((trial, p, m));
                }
            }
            alpha *= config.backtrack;
            if alpha < MIN_ALPHA {
                break None;
            }
        };
        let Some((trial, p, m)) = accepted else {
            if norm <= tol {
                return Ok(finish(
                    disc,
                    Status::Converged,
                    &x,
                    it,
                    norm,
                    tol,
                    &floor,
                    None,
                ));
            }
            return Ok(fail("line search stagnated".into()));
        };
        let dx = trial
            .iter()
            .zip(&x)
            .fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        step_rel = dx / sup(&trial).max(f64::MIN_POSITIVE);
        x = trial;
        parts = p;
        merit = m;
        if !sup(&x).is_finite() || sup(&x) > 1e150 {
            let norm = sup(&parts.residual);
            return Ok(finish(
                disc,
                Status::Diverged,
                &x,
                it,
                norm,
                tol,
                &floor,
                Some("iterates blew up".into()),
            ));
        }
    }
}

/// Quasilinear solve from `k·c₀ φ₁`, `c₀` the line-search amplitude of
/// [`initial_guess`], with nested iteration as fallback.
///
/// When Newton fails from the guess, the same multiple of the coarse
/// line-search amplitude is solved on the next coarser nested mesh
/// (recursively) and the interpolated solution is used as the new start.
pub fn solve_from_multiple(
    disc: &Discretization,
    spec: &ProblemSpec,
    k: f64,
    config: &SolverConfig,
) -> Result<SolveReport> {
    let kind = ResidualKind::Quasilinear;
    let u0 = disc.eigen.phi.scaled(k * guess_amplitude(disc, spec, kind));
    let direct = newton_solve(disc, spec, kind, &u0, config)?;
    if direct.converged() {
        return Ok(direct);
    }
    let Some(coarse) = coarsen(&disc.mesh) else {
        return Ok(direct);
    };
    let cdisc = Discretization::from_mesh(coarse)?;
    let cr = solve_from_multiple(&cdisc, spec, k, config)?;
    if !cr.converged() {
        return Ok(direct);
    }
    let start = prolong(
        &cdisc.mesh,
        &disc.mesh,
        cr.solution.as_ref().expect("converged"),
    );
    let fine = newton_solve(disc, spec, kind, &start, config)?;
    Ok(if fine.converged() { fine } else { direct })
}

/// Cold solve of the quasilinear problem from the line-search guess.
pub fn solve(
    disc: &Discretization,
    spec: &ProblemSpec,
    config: &SolverConfig,
) -> Result<SolveReport> {
    spec.validate()?;
    config.validate()?;
    solve_from_multiple(disc, spec, 1.0, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{residual_quasilinear, Resolution};
    use crate::model::{DomainSpec, GradientCoefSpec, NonlinearitySpec};

    fn disc(m: usize) -> Discretization {
        Discretization::new(&DomainSpec::ball(3, 1.0), &Resolution::radial(m)).unwrap()
    }

    fn lane_emden(lambda: f64) -> ProblemSpec {
        ProblemSpec::new(
            DomainSpec::ball(3, 1.0),
            lambda,
            NonlinearitySpec::power(3.0),
            GradientCoefSpec::zero(),
        )
    }

    #[test]
    fn semilinear_cubic_converges() {
        let d = disc(400);
        let spec = lane_emden(1.0);
        let cfg = SolverConfig::default();
        let u0 = initial_guess(&d, &spec, ResidualKind::Quasilinear);
        let r = newton_solve(&d, &spec, ResidualKind::Quasilinear, &u0, &cfg).unwrap();
        assert_eq!(r.status, Status::Converged, "{r:?}");
        assert!(r.positivity_margin > 0.0);
        let u = r.solution.unwrap();
        let res = residual_quasilinear(&spec, &d.mesh, &u).unwrap();
        assert!(sup(&res) <= r.tolerance);
        assert_eq!(*u.values().last().unwrap(), 0.0);
    }

    #[test]
    fn trivial_problem_is_floor_degenerate() {
        let d = disc(200);
        let spec = lane_emden(0.0);
        let r = newton_solve(
            &d,
            &spec,
            ResidualKind::Quasilinear,
            &d.eigen.phi,
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(r.status, Status::FloorDegenerate, "{r:?}");
    }

    #[test]
    fn frozen_at_solution_reproduces_it() {
        let d = disc(300);
        let spec = ProblemSpec::new(
            DomainSpec::ball(3, 1.0),
            1.0,
            NonlinearitySpec::power(3.0),
            GradientCoefSpec::model(0.3, 1.0, 0.5),
        );
        let cfg = SolverConfig::default();
        let u0 = initial_guess(&d, &spec, ResidualKind::Quasilinear);
        let u = newton_solve(&d, &spec, ResidualKind::Quasilinear, &u0, &cfg).unwrap();
        assert!(u.converged(), "{u:?}");
        let u = u.solution.unwrap();
        let r = newton_solve(&d, &spec, ResidualKind::Frozen(&u), &u, &cfg).unwrap();
        assert!(r.converged());
        assert!(r.solution.unwrap().sup_distance(&u) <= cfg.step_tol * u.sup_norm());
    }
}
