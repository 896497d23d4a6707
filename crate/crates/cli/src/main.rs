//! `gradlab`: batch front end for solves, sweeps, checks, probes, transforms
//! and eigenpairs. Exit codes: 0 ok, 2 non-convergence, 3 invalid input
//! (including bad arguments), 4 I/O.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gradlab::experiment::{
    exit_code_for, find_preset, preset_names, presets, run, Command, Provenance, RunConfig,
    RunStatus,
};
use gradlab::Error;

#[derive(Parser)]
#[command(
    name = "gradlab",
    version,
    about = "Numerical lab for -Δu + g(x,u)|∇u|² = λf(u) + t u^σ"
)]
struct Cli {
    /// Worker threads for sweeps and refinement levels (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Clone)]
struct Common {
    /// Config JSON file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset instead of a config file.
    #[arg(long)]
    preset: Option<String>,
    /// Override a config leaf by dotted path, e.g. `problem.lambda=2`.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "gradlab-out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    PsiDecreasing,
    Comparison,
    Pohozaev,
    Holder,
    Apriori,
    Validate,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformArg {
    Semilinearize,
    Gamma,
    TruncateDelta,
    TruncateS0,
    PowerCheck,
    Blowup,
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

#[derive(Subcommand)]
enum Sub {
    /// Solve one problem; writes report.json and solution.txt.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Warm-started λ sweep; writes sweep.csv and verdict.json.
    SweepLambda {
        #[command(flatten)]
        common: Common,
        /// Comma-separated ascending grid (replaces `grid`; may be empty).
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Sweep in t at fixed λ; writes sweep.csv and verdict.json with t_fail.
    SweepT {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Run one check; writes verdict.json.
    Check {
        #[arg(value_enum)]
        name: CheckArg,
        #[command(flatten)]
        common: Common,
    },
    /// Refinement probe for nonexistence; writes probe.json and probe.csv.
    ProbeNonexist {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Apply a transform; writes transformed.json (and more with `--solve`).
    Transform {
        #[arg(value_enum)]
        kind: TransformArg,
        #[command(flatten)]
        common: Common,
        /// Solve the transformed problem and pull the solution back.
        #[arg(long)]
        solve: bool,
    },
    /// Principal Dirichlet eigenpair; writes eigen.json and eigenvector.txt.
    Eigen {
        #[command(flatten)]
        common: Common,
        /// Use the interval [a, b] instead of the problem domain.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            value_name = "A,B"
        )]
        interval: Option<Vec<f64>>,
        /// Also solve on the refined mesh and extrapolate.
        #[arg(long)]
        richardson: bool,
    },
    /// List the presets.
    Presets,
}

/// `grid=[...]` from `a,b,c`; blank items are skipped so `--grid ""` is empty.
/// Unparsable items are passed through and rejected by config validation.
fn grid_override(grid: &Option<String>) -> Option<String> {
    grid.as_ref().map(|g| {
        let items: Vec<&str> = g
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect();
        format!("grid=[{}]", items.join(","))
    })
}

/// The command, its common options, and overrides implied by its flags.
fn plan(sub: Sub) -> Option<(Command, Common, Vec<String>)> {
    let mut extra = Vec::new();
    let (cmd, common) = match sub {
        Sub::Solve { common } => (Command::Solve, common),
        Sub::SweepLambda { common, grid } => {
            extra.extend(grid_override(&grid));
            (Command::SweepLambda, common)
        }
        Sub::SweepT { common, grid } => {
            extra.extend(grid_override(&grid));
            (Command::SweepT, common)
        }
        Sub::Check { name, common } => {
            extra.push(format!("check.name=\"{}\"", value_name(name)));
            (Command::Check, common)
        }
        Sub::ProbeNonexist { common, levels } => {
            extra.extend(levels.map(|l| format!("levels={l}")));
            (Command::ProbeNonexist, common)
        }
        Sub::Transform {
            kind,
            common,
            solve,
        } => {
            extra.push(format!("transform.kind=\"{}\"", value_name(kind)));
            if solve {
                extra.push("transform.solve=true".into());
            }
            (Command::Transform, common)
        }
        Sub::Eigen {
            common,
            interval,
            richardson,
        } => {
            if let Some(i) = interval {
                let items: Vec<String> = i.iter().map(|v| format!("{v:?}")).collect();
                extra.push(format!("eigen.interval=[{}]", items.join(",")));
            }
            if richardson {
                extra.push("eigen.richardson=true".into());
            }
            (Command::Eigen, common)
        }
        Sub::Presets => return None,
    };
    Some((cmd, common, extra))
}

fn load(common: &Common, extra: &[String]) -> Result<(RunConfig, Provenance), Error> {
    let mut overrides = common.overrides.clone();
    overrides.extend_from_slice(extra);
    match (&common.config, &common.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let cfg = RunConfig::from_json(&text, &overrides)?;
            let prov = Provenance {
                config_path: Some(path.clone()),
                preset: None,
            };
            Ok((cfg, prov))
        }
        (None, Some(name)) => {
            let p = find_preset(name).ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "unknown preset `{name}`; known: {}",
                    preset_names().join(", ")
                ))
            })?;
            let cfg = p.config.with_overrides(&overrides)?;
            let prov = Provenance {
                config_path: None,
                preset: Some(p.info),
            };
            Ok((cfg, prov))
        }
        (None, None) => Err(Error::InvalidSpec(
            "either --config or --preset is required".into(),
        )),
    }
}

#[cfg(feature = "parallel")]
fn set_workers(n: Option<usize>) {
    if let Some(n) = n {
        // fails only if a pool exists already, in which case its size stays
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn set_workers(_: Option<usize>) {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    set_workers(cli.workers);
    let Some((command, common, extra)) = plan(cli.command) else {
        let mut out = std::io::stdout().lock();
        for p in presets() {
            let line = format!(
                "{:<30} {:<14} {}",
                p.info.name,
                p.command.as_str(),
                p.info.claim
            );
            if writeln!(out, "{line}").is_err() {
                break;
            }
        }
        return ExitCode::SUCCESS;
    };
    let result =
        load(&common, &extra).and_then(|(cfg, prov)| run(command, &cfg, &common.out, &prov));
    match result {
        Ok(m) => {
            println!(
                "{}: {} (config {}), outputs in {}",
                command.as_str(),
                match m.status {
                    RunStatus::Ok => "ok",
                    RunStatus::NoConvergence => "no convergence",
                },
                &m.config_hash[..12],
                m.output_dir
            );
            ExitCode::from(m.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("gradlab {}: {e}", command.as_str());
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
