//! Command execution: compute artifacts in memory, then persist them with a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{CheckName, Method, RunConfig, TransformKind};
use super::presets::PresetInfo;
use crate::checks::{
    apriori_scaled_sweep, check_psi_decreasing, comparison_check, holder_quotient,
    nonexistence_probe, pohozaev_terms, PsiCheckInput,
};
use crate::linalg::{principal_eigenpair, richardson};
use crate::mesh::{residual_parts, DiscreteField, Mesh, RadialMesh, ResidualKind};
use crate::model::{validate_spec, ProblemSpec};
use crate::nonlinear::{
    continuation_t, fixed_point_k, initial_guess, solve, Discretization, SolveReport,
};
use crate::transforms::{
    blowup_rescale, gamma_transform, power_transform_check, semilinearize, truncate_at_delta,
    truncate_at_s0, GammaScale,
};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    SweepLambda,
    SweepT,
    Check,
    ProbeNonexist,
    Transform,
    Eigen,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::SweepLambda => "sweep-lambda",
            Command::SweepT => "sweep-t",
            Command::Check => "check",
            Command::ProbeNonexist => "probe-nonexist",
            Command::Transform => "transform",
            Command::Eigen => "eigen",
        }
    }
}

/// Whether the run produced what it was asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    NoConvergence,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::NoConvergence => 2,
        }
    }
}

/// Exit code for a run that ended in an error: 3 invalid input, 4 I/O, 2 otherwise.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 4,
        Error::InvalidSpec(_)
        | Error::InvalidDimension(_)
        | Error::InvalidTable(_)
        | Error::UnsupportedTransform(_)
        | Error::MeshMismatch { .. } => 3,
        _ => 2,
    }
}

/// One output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub body: String,
}

fn json_artifact<T: Serialize>(name: &str, value: &T) -> Artifact {
    let mut body = serde_json::to_string_pretty(value).expect("artifacts serialize");
    body.push('\n');
    Artifact {
        name: name.to_string(),
        body,
    }
}

fn text_artifact(name: &str, body: String) -> Artifact {
    Artifact {
        name: name.to_string(),
        body,
    }
}

/// Artifacts of a command and its status.
#[derive(Debug, Clone)]
pub struct Execution {
    pub status: RunStatus,
    pub artifacts: Vec<Artifact>,
}

/// Where a configuration came from.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    pub config_path: Option<PathBuf>,
    pub preset: Option<PresetInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_path: Option<String>,
    pub preset: Option<PresetInfo>,
    pub command: Command,
    pub problem: ProblemSpec,
    pub output_dir: String,
    pub timestamp: String,
    pub config_hash: String,
    pub status: RunStatus,
    pub files: Vec<String>,
}

/// Run `command` and return its artifacts without touching the file system.
pub fn execute(command: Command, config: &RunConfig) -> Result<Execution> {
    config.validate()?;
    match command {
        Command::Solve => run_solve(config),
        Command::SweepLambda => run_sweep_lambda(config),
        Command::SweepT => run_sweep_t(config),
        Command::Check => run_check(config),
        Command::ProbeNonexist => run_probe(config),
        Command::Transform => run_transform(config),
        Command::Eigen => run_eigen(config),
    }
}

/// Execute, then write every artifact and `manifest.json` into `out_dir`.
pub fn run(
    command: Command,
    config: &RunConfig,
    out_dir: &Path,
    provenance: &Provenance,
) -> Result<RunManifest> {
    let exec = execute(command, config)?;
    fs::create_dir_all(out_dir)?;
    for a in &exec.artifacts {
        fs::write(out_dir.join(&a.name), &a.body)?;
    }
    let manifest = RunManifest {
        config_path: provenance
            .config_path
            .as_ref()
            .map(|p| p.display().to_string()),
        preset: provenance.preset.clone(),
        command,
        problem: config.problem.clone(),
        output_dir: out_dir.display().to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        config_hash: config.hash(),
        status: exec.status,
        files: exec.artifacts.iter().map(|a| a.name.clone()).collect(),
    };
    let m = json_artifact(MANIFEST_FILE, &manifest);
    fs::write(out_dir.join(&m.name), &m.body)?;
    Ok(manifest)
}

fn discretization(config: &RunConfig) -> Result<Discretization> {
    Discretization::new(&config.problem.domain, &config.resolution)
}

fn status_of(report: &SolveReport) -> RunStatus {
    if report.converged() {
        RunStatus::Ok
    } else {
        RunStatus::NoConvergence
    }
}

fn solution_artifacts(
    disc: &Discretization,
    report: &SolveReport,
    out: &mut Vec<Artifact>,
) -> Result<()> {
    if let Some(u) = &report.solution {
        out.push(text_artifact("solution.txt", u.to_text(&disc.mesh)?));
    }
    Ok(())
}

fn solve_with(
    config: &RunConfig,
    spec: &ProblemSpec,
    disc: &Discretization,
) -> Result<SolveReport> {
    match config.method {
        Method::Newton => solve(disc, spec, &config.solver),
        Method::FixedPoint => {
            let u0 = initial_guess(disc, spec, ResidualKind::Quasilinear);
            Ok(fixed_point_k(disc, spec, &u0, &config.solver)?.report)
        }
    }
}

fn run_solve(config: &RunConfig) -> Result<Execution> {
    let disc = discretization(config)?;
    let mut artifacts = Vec::new();
    let report = match config.method {
        Method::Newton => {
            let r = solve(&disc, &config.problem, &config.solver)?;
            artifacts.push(json_artifact("report.json", &r));
            r
        }
        Method::FixedPoint => {
            let u0 = initial_guess(&disc, &config.problem, ResidualKind::Quasilinear);
            let run = fixed_point_k(&disc, &config.problem, &u0, &config.solver)?;
            artifacts.push(json_artifact("report.json", &run));
            run.report
        }
    };
    solution_artifacts(&disc, &report, &mut artifacts)?;
    Ok(Execution {
        status: status_of(&report),
        artifacts,
    })
}

fn run_sweep_lambda(config: &RunConfig) -> Result<Execution> {
    let disc = discretization(config)?;
    let sweep = apriori_scaled_sweep(&disc, &config.problem, &config.grid, &config.solver)?;
    let sups: Vec<f64> = sweep.table.rows.iter().map(|r| r.sup_norm).collect();
    let decreasing = sups.windows(2).all(|w| w[1] < w[0]);
    let verdict = json!({
        "apriori": sweep.verdict,
        "sup_norms": sups,
        "sup_strictly_decreasing": decreasing,
        "converged": sweep.table.rows.iter().filter(|r| r.status.is_converged()).count(),
        "points": sweep.table.rows.len(),
    });
    Ok(Execution {
        status: RunStatus::Ok,
        artifacts: vec![
            text_artifact("sweep.csv", sweep.table.to_csv()),
            json_artifact("verdict.json", &verdict),
        ],
    })
}

fn run_sweep_t(config: &RunConfig) -> Result<Execution> {
    let disc = discretization(config)?;
    let sweep = continuation_t(&disc, &config.problem, &config.grid, &config.solver)?;
    let verdict = json!({
        "t_fail": sweep.t_fail,
        "lambda": config.problem.lambda,
        "points": sweep.table.rows.len(),
    });
    Ok(Execution {
        status: RunStatus::Ok,
        artifacts: vec![
            text_artifact("sweep.csv", sweep.table.to_csv()),
            json_artifact("verdict.json", &verdict),
        ],
    })
}

/// Solve, or return the failed report as a finished execution.
fn solved(
    config: &RunConfig,
    disc: &Discretization,
) -> Result<std::result::Result<(SolveReport, DiscreteField), Execution>> {
    let report = solve_with(config, &config.problem, disc)?;
    match (&report.solution, report.converged()) {
        (Some(u), true) => Ok(Ok((report.clone(), u.clone()))),
        _ => Ok(Err(Execution {
            status: RunStatus::NoConvergence,
            artifacts: vec![json_artifact("report.json", &report)],
        })),
    }
}

fn run_check(config: &RunConfig) -> Result<Execution> {
    let name = config.check.name.ok_or_else(|| {
        Error::InvalidSpec("check.name is required (psi-decreasing, comparison, pohozaev, holder, apriori, validate)".into())
    })?;
    let opts = &config.check;
    let spec = &config.problem;
    let ok = |artifacts| {
        Ok(Execution {
            status: RunStatus::Ok,
            artifacts,
        })
    };
    match name {
        CheckName::PsiDecreasing => {
            let input = PsiCheckInput {
                g: spec.g.clone(),
                x0: opts.x0,
                p: spec.f.p,
                dimension: spec.domain.dimension(),
                scale: opts.scale,
                anchor: opts.anchor,
            };
            ok(vec![json_artifact(
                "verdict.json",
                &check_psi_decreasing(&input, None)?,
            )])
        }
        CheckName::Validate => ok(vec![json_artifact("verdict.json", &validate_spec(spec)?)]),
        CheckName::Apriori => run_sweep_lambda(config),
        CheckName::Pohozaev => {
            let disc = discretization(config)?;
            let q = opts.exponent.unwrap_or(spec.f.p);
            let (v, status) = if opts.manufactured {
                let v = DiscreteField::from_fn(&disc.mesh, |p| 1.0 - p.rho * p.rho);
                (v, None)
            } else {
                match solved(config, &disc)? {
                    Ok((r, u)) => (u, Some(r.status)),
                    Err(e) => return Ok(e),
                }
            };
            let terms = pohozaev_terms(&disc.mesh, &v, q)?;
            let out = json!({
                "exponent": q,
                "field": if opts.manufactured { "manufactured" } else { "solution" },
                "solve_status": status,
                "defect": terms.defect,
                "terms": terms,
            });
            ok(vec![json_artifact("verdict.json", &out)])
        }
        CheckName::Holder => {
            let disc = discretization(config)?;
            let (r, u) = match solved(config, &disc)? {
                Ok(x) => x,
                Err(e) => return Ok(e),
            };
            let q = holder_quotient(&u, &disc.mesh, opts.alpha)?;
            let out = json!({ "alpha": opts.alpha, "quotient": q, "sup_norm": r.sup_norm });
            ok(vec![json_artifact("verdict.json", &out)])
        }
        CheckName::Comparison => {
            let disc = discretization(config)?;
            let (_, v) = match solved(config, &disc)? {
                Ok(x) => x,
                Err(e) => return Ok(e),
            };
            let u = v.scaled(opts.theta);
            let h = midpoint_source(spec, &disc.mesh, &u, &v)?;
            let verdict = comparison_check(spec, &disc.mesh, &u, &v, &h)?;
            ok(vec![json_artifact("verdict.json", &verdict)])
        }
    }
}

/// `h = (A(u) + A(v)) / 2` at the unknowns, zero on the boundary.
fn midpoint_source(
    spec: &ProblemSpec,
    mesh: &Mesh,
    u: &DiscreteField,
    v: &DiscreteField,
) -> Result<DiscreteField> {
    let a = residual_parts(spec, mesh, u, ResidualKind::Quasilinear)?;
    let b = residual_parts(spec, mesh, v, ResidualKind::Quasilinear)?;
    let mut h = vec![0.0; mesh.node_count()];
    for (j, k) in mesh.unknowns().into_iter().enumerate() {
        let au = -a.laplacian[j] + a.gradient_term[j];
        let av = -b.laplacian[j] + b.gradient_term[j];
        h[k] = 0.5 * (au + av);
    }
    DiscreteField::new(mesh, h)
}

fn run_probe(config: &RunConfig) -> Result<Execution> {
    let report = nonexistence_probe(
        &config.problem,
        &config.resolution,
        config.levels,
        &config.solver,
    )?;
    Ok(Execution {
        status: RunStatus::Ok,
        artifacts: vec![
            json_artifact("probe.json", &report),
            text_artifact("probe.csv", report.to_csv()),
        ],
    })
}

fn run_transform(config: &RunConfig) -> Result<Execution> {
    let opts = &config.transform;
    let kind = opts.kind.ok_or_else(|| {
        Error::InvalidSpec("transform.kind is required (semilinearize, gamma, truncate-delta, truncate-s0, power-check, blowup)".into())
    })?;
    let spec = &config.problem;
    let tp = match kind {
        TransformKind::Semilinearize => semilinearize(spec)?,
        TransformKind::Gamma => {
            let scale = opts.b.map_or(GammaScale::Auto, |b| GammaScale::Fixed { b });
            gamma_transform(spec, opts.gamma, scale)?
        }
        TransformKind::TruncateDelta => truncate_at_delta(spec, opts.level)?,
        TransformKind::TruncateS0 => truncate_at_s0(spec, opts.s0)?,
        TransformKind::PowerCheck | TransformKind::Blowup => {
            let disc = discretization(config)?;
            let (r, u) = match solved(config, &disc)? {
                Ok(x) => x,
                Err(e) => return Ok(e),
            };
            let mut artifacts = vec![json_artifact("report.json", &r)];
            if kind == TransformKind::PowerCheck {
                let mu = spec.g.constant_mu().ok_or_else(|| {
                    Error::UnsupportedTransform("power check needs a constant μ".into())
                })?;
                let d = power_transform_check(&disc.mesh, &u, mu, spec.lambda, spec.f.p)?;
                artifacts.push(json_artifact("defect.json", &d));
            } else {
                let prof = blowup_rescale(&u, &disc.mesh, spec.f.p)?;
                artifacts.push(json_artifact("profile.json", &prof));
            }
            return Ok(Execution {
                status: RunStatus::Ok,
                artifacts,
            });
        }
    };
    let mut artifacts = vec![json_artifact("transformed.json", &tp)];
    let mut status = RunStatus::Ok;
    if opts.solve {
        let disc = discretization(config)?;
        let r = solve_with(config, &tp.spec, &disc)?;
        status = status_of(&r);
        if let (true, Some(v)) = (r.converged(), &r.solution) {
            let u = tp.pull_back(v)?;
            artifacts.push(text_artifact("solution.txt", u.to_text(&disc.mesh)?));
        }
        artifacts.push(json_artifact("report.json", &r));
    }
    Ok(Execution { status, artifacts })
}

fn run_eigen(config: &RunConfig) -> Result<Execution> {
    let mesh = match config.eigen.interval {
        Some([a, b]) => Mesh::Radial(RadialMesh::interval(a, b, config.resolution.intervals)?),
        None => Mesh::build(&config.problem.domain, &config.resolution)?,
    };
    let e = principal_eigenpair(&mesh)?;
    let (refined, extrapolated) = if config.eigen.richardson {
        let f = principal_eigenpair(&mesh.refined())?;
        (Some(f.lambda1), Some(richardson(e.lambda1, f.lambda1)))
    } else {
        (None, None)
    };
    let out = json!({
        "lambda1": e.lambda1,
        "iterations": e.iterations,
        "residual": e.residual,
        "refined_lambda1": refined,
        "extrapolated": extrapolated,
    });
    Ok(Execution {
        status: RunStatus::Ok,
        artifacts: vec![
            json_artifact("eigen.json", &out),
            text_artifact("eigenvector.txt", e.phi.to_text(&mesh)?),
        ],
    })
}
