//! The fixed-point map `K(v) = u`, `u` the solution of the problem with
//! coefficients frozen at `v`.
//!
//! Along the amplitude direction `K` is expanding at solutions of mountain-pass
//! type (for `g ≡ 0`, `K(a v) = a^p K(v)`), so each outer step first matches
//! the amplitude by a scalar root find, `ℓ(K(a v̂)) = a` with `ℓ` the
//! φ₁-weighted mean, and then relaxes the shape: `v ← (1-θ) v + θ K(a v̂)`.

use serde::Serialize;

use super::newton::{finish, tolerance};
use super::{newton_solve, Discretization, SolveReport, SolverConfig, Status};
use crate::mesh::{residual_parts, DiscreteField, ResidualKind};
use crate::model::ProblemSpec;
use crate::Result;

/// Relative accuracy of the amplitude root.
const AMPLITUDE_TOL: f64 = 1e-13;
const MAX_BRACKET: usize = 60;

/// Result of [`fixed_point_k`]: the final report and the outer history.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointRun {
    pub report: SolveReport,
    /// `sup |v_{k+1} - v_k|` per outer iteration.
    pub steps: Vec<f64>,
    /// Matched amplitude per outer iteration.
    pub amplitudes: Vec<f64>,
    /// Newton iterations of the final quasilinear polish (0 when not needed).
    pub polish_iterations: usize,
}

struct Frozen<'a> {
    disc: &'a Discretization,
    spec: &'a ProblemSpec,
    config: &'a SolverConfig,
    weight: Vec<f64>,
    weight_sum: f64,
}

impl Frozen<'_> {
    fn mean(&self, u: &DiscreteField) -> f64 {
        u.values()
            .iter()
            .zip(&self.weight)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / self.weight_sum
    }

    /// `K(v)`, warm-started from `start`.
    fn apply(
        &self,
        v: &DiscreteField,
        start: &DiscreteField,
    ) -> std::result::Result<DiscreteField, SolveReport> {
        let r = newton_solve(
            self.disc,
            self.spec,
            ResidualKind::Frozen(v),
            start,
            self.config,
        )
        .expect("fields are built on this mesh");
        if r.converged() {
            Ok(r.solution.expect("converged reports carry a solution"))
        } else {
            Err(r)
        }
    }

    /// Solve `ℓ(K(a v̂)) = a` for `a`, starting near `a0`.
    fn amplitude(
        &self,
        shape: &DiscreteField,
        a0: f64,
        warm: &DiscreteField,
    ) -> std::result::Result<(f64, DiscreteField), SolveReport> {
        // h(log a) = log ℓ(K(a v̂)) - log a; find a sign change by alternating expansion
        let eval = |la: f64,
                    warm: &DiscreteField|
         -> std::result::Result<(f64, DiscreteField), SolveReport> {
            let a = la.exp();
            let k = self.apply(&shape.scaled(a), warm)?;
            let m = self.mean(&k);
            if !(m > 0.0) {
                return Err(SolveReport::failed(
                    Status::Diverged,
                    0,
                    "frozen solve lost positivity".into(),
                ));
            }
            Ok((m.ln() - la, k))
        };
        let la0 = a0.ln();
        let (h0, k0) = eval(la0, warm)?;
        if h0 == 0.0 {
            return Ok((a0, k0));
        }
        let (mut lo, mut hlo, mut klo) = (la0, h0, k0);
        let mut found = None;
        let mut width = 0.05f64;
        for _ in 0..MAX_BRACKET {
            for dir in [1.0, -1.0] {
                let la = la0 + dir * width;
                if let Ok((h, k)) = eval(la, &klo.scaled((la - lo).exp())) {
                    if h.signum() != h0.signum() {
                        found = Some((la, h, k));
                        break;
                    }
                }
            }
            if found.is_some() {
                break;
            }
            width *= 1.6;
        }
        let Some((mut hi, mut hhi, mut khi)) = found else {
            return Err(SolveReport::failed(
                Status::Diverged,
                0,
                "no amplitude bracket".into(),
            ));
        };
        // bisection with secant acceleration in log a
        for _ in 0..200 {
            if (hi - lo).abs() <= AMPLITUDE_TOL * (1.0 + lo.abs()) {
                break;
            }
            let secant = lo - hlo * (hi - lo) / (hhi - hlo);
            let mid = 0.5 * (lo + hi);
            let la = if secant.is_finite() && (secant - mid).abs() < 0.25 * (hi - lo).abs() {
                secant
            } else {
                mid
            };
            let warm = klo.scaled((la - lo).exp());
            let (h, k) = eval(la, &warm)?;
            if h == 0.0 {
                return Ok((la.exp(), k));
            }
            if h.signum() == hlo.signum() {
                lo = la;
                hlo = h;
                klo = k;
            } else {
                hi = la;
                hhi = h;
                khi = k;
            }
        }
        Ok(if hlo.abs() <= hhi.abs() {
            (lo.exp(), klo)
        } else {
            (hi.exp(), khi)
        })
    }
}

/// Iterate the amplitude-matched, relaxed map `v ↦ K(v)` from `u0`.
///
/// Stops when `sup |v_{k+1} - v_k| < step_tol · ‖v‖∞`. A two-cycle is
/// reported as divergence. The limit is finally polished by quasilinear
/// Newton so that the returned residual refers to the original problem.
pub fn fixed_point_k(
    disc: &Discretization,
    spec: &ProblemSpec,
    u0: &DiscreteField,
    config: &SolverConfig,
) -> Result<FixedPointRun> {
    config.validate()?;
    let mesh = &disc.mesh;
    u0.check(mesh)?;
    let weight = disc.eigen.phi.values().to_vec();
    let weight_sum: f64 = weight.iter().sum();
    let op = Frozen {
        disc,
        spec,
        config,
        weight,
        weight_sum,
    };
    let floor = disc.floor(config.eps_pos);

    let mut v = u0.clone();
    for (x, f) in mesh.unknowns().into_iter().zip(&floor) {
        if !(v.values()[x] >= *f) {
            let mut vals = v.into_values();
            vals[x] = *f;
            v = DiscreteField::from_vec(vals);
        }
    }
    let mut prev: Option<DiscreteField> = None;
    let mut steps = Vec::new();
    let mut amplitudes = Vec::new();
    let mut warm = v.clone();

    let fail = |report: SolveReport, steps, amplitudes, it: usize, note: &str| {
        let mut report = report;
        report.iterations = it;
        report.message = Some(format!("{note}: {}", report.message.unwrap_or_default()));
        Ok(FixedPointRun {
            report,
            steps,
            amplitudes,
            polish_iterations: 0,
        })
    };

    for it in 1..=config.max_fixed_point {
        let a_cur = op.mean(&v);
        if !(a_cur > 0.0) {
            let r = SolveReport::failed(Status::Diverged, it, "iterate lost positivity".into());
            return fail(r, steps, amplitudes, it, "outer iteration");
        }
        let shape = v.scaled(1.0 / a_cur);
        let (a, k) = match op.amplitude(&shape, a_cur, &warm) {
            Ok(x) => x,
            Err(r) => return fail(r, steps, amplitudes, it, "frozen solve"),
        };
        amplitudes.push(a);
        let next = DiscreteField::from_vec(
            v.values()
                .iter()
                .zip(k.values())
                .map(|(old, new)| (1.0 - config.theta) * old + config.theta * new)
                .collect(),
        );
        let step = next.sup_distance(&v);
        steps.push(step);
        warm = k;
        let size = next.sup_norm();
        if step < config.step_tol * size {
            return polish(disc, spec, &next, config, it, steps, amplitudes);
        }
        if let Some(p) = &prev {
            if next.sup_distance(p) < config.step_tol * size {
                let x = mesh.gather(&next);
                let mut r = finish(
                    disc,
                    Status::Diverged,
                    &x,
                    it,
                    f64::NAN,
                    f64::NAN,
                    &floor,
                    None,
                );
                r.message = Some(format!("period-2 cycle with amplitude {step:e}"));
                return Ok(FixedPointRun {
                    report: r,
                    steps,
                    amplitudes,
                    polish_iterations: 0,
                });
            }
        }
        prev = Some(std::mem::replace(&mut v, next));
    }
    let x = mesh.gather(&v);
    let (res, tol) = quasilinear_residual(disc, spec, &v, config);
    let r = finish(
        disc,
        Status::MaxIterations,
        &x,
        config.max_fixed_point,
        res,
        tol,
        &floor,
        None,
    );
    Ok(FixedPointRun {
        report: r,
        steps,
        amplitudes,
        polish_iterations: 0,
    })
}

fn quasilinear_residual(
    disc: &Discretization,
    spec: &ProblemSpec,
    u: &DiscreteField,
    config: &SolverConfig,
) -> (f64, f64) {
    match residual_parts(spec, &disc.mesh, u, ResidualKind::Quasilinear) {
        Ok(p) => {
            let x = disc.mesh.gather(u);
            let tol = tolerance(&p, &x, disc.mesh.laplacian_diag_max(), config.rtol);
            (p.residual.iter().fold(0.0f64, |m, v| m.max(v.abs())), tol)
        }
        Err(_) => (f64::INFINITY, f64::NAN),
    }
}

fn polish(
    disc: &Discretization,
    spec: &ProblemSpec,
    u: &DiscreteField,
    config: &SolverConfig,
    outer: usize,
    steps: Vec<f64>,
    amplitudes: Vec<f64>,
) -> Result<FixedPointRun> {
    let floor = disc.floor(config.eps_pos);
    let (res, tol) = quasilinear_residual(disc, spec, u, config);
    if res <= tol {
        let r = finish(
            disc,
            Status::Converged,
            &disc.mesh.gather(u),
            outer,
            res,
            tol,
            &floor,
            None,
        );
        return Ok(FixedPointRun {
            report: r,
            steps,
            amplitudes,
            polish_iterations: 0,
        });
    }
    let mut r = newton_solve(disc, spec, ResidualKind::Quasilinear, u, config)?;
    let polish_iterations = r.iterations;
    if let Some(sol) = &r.solution {
        let moved = sol.sup_distance(u);
        // the polish may only remove the last rounding-level defect of the limit
        if r.converged() && moved > 1e-6 * u.sup_norm() {
            r.status = Status::Diverged;
            r.message = Some(format!("polish moved the fixed point by {moved:e}"));
        }
    }
    r.iterations = outer;
    Ok(FixedPointRun {
        report: r,
        steps,
        amplitudes,
        polish_iterations,
    })
}
