//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero on any failure.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use gradlab::checks::*;
use gradlab::experiment::{presets, run, Provenance, MANIFEST_FILE};
use gradlab::linalg::{principal_eigenpair, richardson};
use gradlab::mesh::{
    jacobian, residual, DiscreteField, Mesh, RadialMesh, ResidualKind, Resolution,
};
use gradlab::model::{
    thresholds, two_star, GVariant, GradientCoefSpec, InnerRegion, MuFieldSpec, NonlinearitySpec,
    ProblemSpec, SourceSpec, Table, Tail,
};
use gradlab::nonlinear::{
    continuation_lambda, continuation_t, solve, Discretization, SolverConfig,
};
use gradlab::transforms::semilinearize;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{ball, manufactured};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn orders(e: &[f64]) -> Vec<f64> {
    e.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

fn sci(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", items.join(", "))
}

fn disc(m: usize) -> Discretization {
    Discretization::new(&ball(), &Resolution::radial(m)).unwrap()
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scaling_law() -> Outcome {
    let spec = ProblemSpec::new(
        ball(),
        1.0,
        NonlinearitySpec::power(3.0),
        GradientCoefSpec::constant_over_s(0.4),
    );
    let d = disc(2000);
    let cfg = SolverConfig::default();
    let mut scaled = Vec::new();
    let mut slowest = 0.0f64;
    for lambda in [0.1, 1.0, 10.0, 100.0] {
        let s = spec.with_lambda(lambda);
        let t = Instant::now();
        let r = solve(&d, &s, &cfg).map_err(|e| e.to_string())?;
        slowest = slowest.max(t.elapsed().as_secs_f64());
        if !r.converged() {
            return Err(format!("λ = {lambda}: {:?}", r.status));
        }
        scaled.push(s.scaled_norm(r.sup_norm));
    }
    let spread = scaled
        .iter()
        .map(|v| (v / scaled[0] - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(
        spread <= 1e-8 && slowest < 1.0,
        format!(
            "λ^(1/(p-1))‖u‖∞ = {:.10}, relative spread {spread:.1e}, slowest solve {slowest:.2} s",
            scaled[0]
        ),
    )
}

fn transform_equivalence() -> Outcome {
    let spec = ProblemSpec::new(
        ball(),
        1.0,
        NonlinearitySpec::power(3.0),
        GradientCoefSpec::model(0.3, 1.0, 0.5),
    );
    let tp = semilinearize(&spec).map_err(|e| e.to_string())?;
    let cfg = SolverConfig::default();
    let mut diffs = Vec::new();
    for m in [500, 1000, 2000] {
        let d = disc(m);
        let direct = solve(&d, &spec, &cfg).map_err(|e| e.to_string())?;
        let semi = solve(&d, &tp.spec, &cfg).map_err(|e| e.to_string())?;
        let (Some(u), Some(w)) = (direct.solution.as_ref(), semi.solution.as_ref()) else {
            return Err(format!("M = {m}: a solve did not converge"));
        };
        if !(direct.converged() && semi.converged()) {
            return Err(format!("M = {m}: a solve did not converge"));
        }
        let back = tp.pull_back(w).map_err(|e| e.to_string())?;
        let diff: Vec<f64> = u
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| a - b)
            .collect();
        diffs.push(sup(&diff));
    }
    let q = orders(&diffs);
    verdict(
        q.iter().all(|&o| o >= 1.8),
        format!("differences {}, orders {q:.2?}", sci(&diffs)),
    )
}

fn psi_sharpness() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = 0;
    let mut disagreements = 0;
    for n in [3usize, 4, 5] {
        let q = two_star(n).unwrap() - 1.0;
        let p = 0.5 * (1.0 + q);
        let s1 = thresholds(n, p).unwrap().sigma1;
        let check = |sigma: f64| {
            let input = PsiCheckInput {
                g: GradientCoefSpec::constant_over_s(sigma),
                x0: [0.0, 0.0],
                p,
                dimension: n,
                scale: 1.0,
                anchor: None,
            };
            check_psi_decreasing(&input, None).map(|v| v.passed())
        };
        let below = check(s1 - 1e-3).map_err(|e| e.to_string())?;
        let above = check(s1 + 1e-3).map_err(|e| e.to_string())?;
        if !below || above {
            failures += 1;
        }
        notes.push(format!("N={n}: {below}/{above}"));
        for i in 0..40 {
            let pi = 1.0 + (q - 1.0) * (i as f64 + 0.5f64.sqrt()) / 40.0;
            for j in 0..40 {
                let sigma = (j as f64 + 0.2f64.sqrt()) / 40.0;
                let e = constant_over_s_exponent(n, pi, sigma).unwrap();
                let input = PsiCheckInput {
                    g: GradientCoefSpec::constant_over_s(sigma),
                    x0: [0.0, 0.0],
                    p: pi,
                    dimension: n,
                    scale: 1.0,
                    anchor: None,
                };
                let passed = check_psi_decreasing(&input, None)
                    .map_err(|e| e.to_string())?
                    .passed();
                if passed != (e < 0.0) {
                    disagreements += 1;
                }
            }
        }
    }
    verdict(
        failures == 0 && disagreements == 0,
        format!(
            "pass below / pass above σ₁: {}; {disagreements} sign disagreements on 4800 points",
            notes.join(", ")
        ),
    )
}

fn threshold_ordering() -> Outcome {
    let mut violations = 0;
    let mut count = 0;
    for n in 3..=10 {
        let q = two_star(n).unwrap() - 1.0;
        for i in 0..100 {
            let p = 1.0 + (q - 1.0) * (i as f64 + 0.5) / 100.0;
            let t = thresholds(n, p).unwrap();
            count += 1;
            if !(t.sigma3 < t.sigma2 && t.sigma2 < t.sigma1 && t.sigma1 < 1.0) {
                violations += 1;
            }
        }
    }
    verdict(
        violations == 0,
        format!("{violations} violations among {count} (N, p) pairs"),
    )
}

fn comparison_principle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let m = manufactured(
            rng.gen_range(0.02..0.98),
            rng.gen_range(0.2..5.0),
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.02..0.3),
            rng.gen_range(80..240),
        );
        let v =
            comparison_check(&m.spec, &m.disc.mesh, &m.u, &m.v, &m.h).map_err(|e| e.to_string())?;
        let excess =
            m.u.values()
                .iter()
                .zip(m.v.values())
                .map(|(a, b)| a - b)
                .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(excess);
        if !v.passed() || excess > 1e-10 {
            failures += 1;
        }
    }
    verdict(
        failures == 0,
        format!("{failures} failures in 100 pairs, max(u - v) = {worst:.2e}"),
    )
}

fn eigenpair() -> Outcome {
    let lambda = |mesh: Mesh| principal_eigenpair(&mesh).map(|e| e.lambda1);
    let interval = |m| Mesh::Radial(RadialMesh::interval(0.0, 1.0, m).unwrap());
    let sphere = |m| Mesh::build(&ball(), &Resolution::radial(m)).unwrap();
    let pi2 = PI * PI;
    let a = richardson(
        lambda(interval(2000)).map_err(|e| e.to_string())?,
        lambda(interval(4000)).map_err(|e| e.to_string())?,
    );
    let b = richardson(
        lambda(sphere(2000)).map_err(|e| e.to_string())?,
        lambda(sphere(4000)).map_err(|e| e.to_string())?,
    );
    verdict(
        (a - pi2).abs() < 1e-4 && (b - pi2).abs() < 1e-4,
        format!(
            "interval {a:.9} (error {:.1e}), ball {b:.9} (error {:.1e})",
            (a - pi2).abs(),
            (b - pi2).abs()
        ),
    )
}

fn probe_spec(outside: f64) -> ProblemSpec {
    let mu = MuFieldSpec::Piecewise {
        region: InnerRegion::Ball { radius: 0.5 },
        inside: 0.3,
        outside,
    };
    let mut spec = ProblemSpec::new(
        ball(),
        0.0,
        NonlinearitySpec::power(3.0),
        GradientCoefSpec::model_field(mu, 1.0, 0.0),
    );
    spec.source = Some(SourceSpec::Bump {
        radius: 0.25,
        amplitude: 10.0,
    });
    spec
}

fn nonexistence() -> Outcome {
    let cfg = SolverConfig::default();
    let res = Resolution::radial(400);
    let strong = nonexistence_probe(&probe_spec(2.0), &res, 3, &cfg).map_err(|e| e.to_string())?;
    let control = nonexistence_probe(&probe_spec(0.3), &res, 3, &cfg).map_err(|e| e.to_string())?;
    let statuses: Vec<&str> = strong.levels.iter().map(|l| l.status.as_str()).collect();
    verdict(
        strong.degenerate() && !control.degenerate() && control.i_h_spread <= 1.1,
        format!(
            "μ = 2 outside: degenerate = {} ({statuses:?}); control: degenerate = {}, I_h spread {:.4}",
            strong.degenerate(),
            control.degenerate(),
            control.i_h_spread
        ),
    )
}

fn large_lambda() -> Outcome {
    let spec = ProblemSpec::new(
        ball(),
        1.0,
        NonlinearitySpec::power(2.0),
        GradientCoefSpec::model(0.5, 0.5, 0.0),
    );
    let t = continuation_lambda(
        &disc(1000),
        &spec,
        &[10.0, 100.0, 1000.0],
        &SolverConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let sups: Vec<f64> = t.rows.iter().map(|r| r.sup_norm).collect();
    let converged = t.rows.iter().all(|r| r.status.is_converged());
    let decreasing = sups.windows(2).all(|w| w[1] < w[0]);
    verdict(
        converged && decreasing && sups[2] < 0.1,
        format!("‖u‖∞ = {sups:.4?}"),
    )
}

fn t_sweep() -> Outcome {
    let spec = ProblemSpec::new(
        ball(),
        1.0,
        NonlinearitySpec::power(3.0),
        GradientCoefSpec::constant_over_s(0.4),
    );
    let grid: Vec<f64> = std::iter::once(0.0)
        .chain((0..=36).map(|k| 0.1 * 1.25f64.powi(k)))
        .collect();
    let cfg = SolverConfig::default();
    let mut fails = Vec::new();
    for m in [1000, 2000] {
        let s = continuation_t(&disc(m), &spec, &grid, &cfg).map_err(|e| e.to_string())?;
        fails.push(s.t_fail);
    }
    let ok = match (fails[0], fails[1]) {
        (Some(a), Some(b)) => a.max(b) / a.min(b) <= 2.0,
        _ => false,
    };
    verdict(ok, format!("t_fail at M = 1000, 2000: {fails:.2?}"))
}

fn pohozaev() -> Outcome {
    let cfg = SolverConfig::default();
    let defect = |q: f64, m: usize| -> Result<f64, String> {
        let spec = ProblemSpec::new(
            ball(),
            1.0,
            NonlinearitySpec::power(q),
            GradientCoefSpec::zero(),
        );
        let d = disc(m);
        let r = solve(&d, &spec, &cfg).map_err(|e| e.to_string())?;
        let u = r.solution.ok_or("no iterate")?;
        pohozaev_defect(&d.mesh, &u, q)
            .map(f64::abs)
            .map_err(|e| e.to_string())
    };
    let sub: Vec<f64> = [250, 500, 1000, 2000]
        .iter()
        .map(|&m| defect(3.0, m))
        .collect::<Result<_, _>>()?;
    let q_sup = two_star(3).unwrap() - 1.0 + 0.5;
    let sup_d = defect(q_sup, 2000)?;
    let ord = orders(&sub);
    verdict(
        ord.iter().all(|&o| o >= 1.5) && sup_d >= 10.0 * sub[3],
        format!(
            "subcritical |D| {} (orders {ord:.2?}); supercritical |D| = {sup_d:.3e}",
            sci(&sub)
        ),
    )
}

fn g_variants() -> Vec<(&'static str, GradientCoefSpec)> {
    let xs: Vec<f64> = (0..=40).map(|k| 0.1 * k as f64).collect();
    let a = Table::new(
        xs.clone(),
        xs.iter().map(|s| 1.0 + 0.5 * (2.0 * s).sin()).collect(),
        Tail::Constant,
    )
    .unwrap();
    let b = Table::new(
        xs.clone(),
        xs.iter().map(|s| 0.3 * s / (1.0 + s)).collect(),
        Tail::Constant,
    )
    .unwrap();
    let radial_mu = MuFieldSpec::Radial {
        profile: Table::new(vec![0.0, 0.5, 1.0], vec![0.4, -0.2, 0.3], Tail::Constant).unwrap(),
    };
    let table = |b: Option<Table>| GradientCoefSpec {
        variant: GVariant::Table {
            mu: radial_mu.clone(),
            shift: 0.2,
            power: 1.5,
            a: a.clone(),
            b,
        },
        delta: 0.2,
        tau: None,
        sigma: None,
        nonnegative: false,
        majorant: None,
    };
    vec![
        ("model-singular", GradientCoefSpec::model(0.7, 1.3, 0.0)),
        (
            "model-regularized",
            GradientCoefSpec::model_field(radial_mu.clone(), 2.0, 0.3),
        ),
        ("constant-over-s", GradientCoefSpec::constant_over_s(0.4)),
        ("table", table(None)),
        ("table-with-b", table(Some(b))),
    ]
}

fn jacobian_fd() -> Outcome {
    const EPS: f64 = 1e-7;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (name, g) in g_variants() {
        let mut spec = ProblemSpec::new(ball(), 1.5, NonlinearitySpec::power(2.5), g).with_t(0.3);
        spec.sigma_t = 0.4;
        let mesh = Mesh::build(&spec.domain, &Resolution::radial(60)).unwrap();
        for trial in 0..50 {
            let (c0, c1, c2) = (
                rng.gen_range(0.05..0.5),
                rng.gen_range(0.5..3.0),
                rng.gen_range(-0.5..0.5),
            );
            let noise: Vec<f64> = (0..mesh.node_count())
                .map(|_| rng.gen_range(0.0..0.05))
                .collect();
            let u = DiscreteField::new(
                &mesh,
                (0..mesh.node_count())
                    .map(|k| {
                        let r = mesh.point(k).rho;
                        c0 + c1 * (1.0 - r * r) + c2 * r * (1.0 - r) + noise[k]
                    })
                    .collect(),
            )
            .map_err(|e| e.to_string())?;
            // Dirichlet data: the perturbed fields below also carry a zero boundary
            let x0 = mesh.gather(&u);
            let u = mesh.scatter(&x0);
            let dir: Vec<f64> = x0.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            let j = jacobian(&spec, &mesh, &u, ResidualKind::Quasilinear)
                .map_err(|e| format!("{name}: {e}"))?;
            let mut jd = vec![0.0; x0.len()];
            j.apply(&dir, &mut jd);
            let shifted = |sign: f64| {
                let x: Vec<f64> = x0
                    .iter()
                    .zip(&dir)
                    .map(|(a, d)| a + sign * EPS * d)
                    .collect();
                residual(&spec, &mesh, &mesh.scatter(&x), ResidualKind::Quasilinear)
            };
            let fp = shifted(1.0).map_err(|e| format!("{name}: {e}"))?;
            let fm = shifted(-1.0).map_err(|e| format!("{name}: {e}"))?;
            let scale = sup(&jd).max(1.0);
            let err = fp
                .iter()
                .zip(&fm)
                .zip(&jd)
                .map(|((p, m), a)| ((p - m) / (2.0 * EPS) - a).abs())
                .fold(0.0, f64::max)
                / scale;
            worst = worst.max(err);
            if err > 1e-6 {
                failures.push(format!("{name}#{trial}: {err:.1e}"));
            }
        }
    }
    let shown = failures.len().min(5);
    verdict(
        failures.is_empty(),
        format!(
            "5 variants × 50 trials, worst relative discrepancy {worst:.1e}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!(
                    "; {} failing, first: {}",
                    failures.len(),
                    failures[..shown].join(", ")
                )
            }
        ),
    )
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn reproducibility() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut mismatched = Vec::new();
    let all = presets();
    for p in &all {
        let prov = Provenance {
            config_path: None,
            preset: Some(p.info.clone()),
        };
        let mut bodies = Vec::new();
        for k in 0..2 {
            let dir = tmp.path().join(format!("{}-{k}", p.info.name));
            let m = run(p.command, &p.config, &dir, &prov).map_err(|e| e.to_string())?;
            let mut files = read_dir(&dir);
            let manifest: serde_json::Value =
                serde_json::from_slice(&files.remove(MANIFEST_FILE).unwrap()).unwrap();
            bodies.push((m.config_hash, files, manifest["files"].clone()));
        }
        if bodies[0] != bodies[1] {
            mismatched.push(p.info.name.clone());
        }
    }
    verdict(
        mismatched.is_empty(),
        format!("{} presets rerun, mismatches: {mismatched:?}", all.len()),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact scaling law", scaling_law),
        ("transform equivalence", transform_equivalence),
        ("ψ-condition threshold sharpness", psi_sharpness),
        ("threshold ordering", threshold_ordering),
        ("comparison principle", comparison_principle),
        ("principal eigenvalue", eigenpair),
        ("nonexistence degeneration", nonexistence),
        ("large-λ smallness", large_lambda),
        ("t-sweep failure point", t_sweep),
        ("Pohozaev defect", pohozaev),
        ("Jacobian finite differences", jacobian_fd),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {tag} {name}: {detail} [{:.1} s]",
            k + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
