//! Named experiments: one per existence or nonexistence regime of the model
//! problem `-Δu + μ(x)|∇u|²/(u+δ)^γ = λu^p`, plus two regimes whose outcome is open.

use serde::{Deserialize, Serialize};

use super::config::{Method, RunConfig};
use super::Command;
use crate::mesh::Resolution;
use crate::model::{
    DomainSpec, GradientCoefSpec, InnerRegion, MuFieldSpec, NonlinearitySpec, ProblemSpec,
    SourceSpec, Table, Tail,
};

/// The qualitative outcome a preset is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    SolutionExists,
    NoSolution,
    /// Solutions exist for large λ and `‖u_λ‖∞ → 0`.
    VanishingForLargeLambda,
    NoAssertedOutcome,
}

/// What the manifest records about a preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    /// The statement the preset exercises.
    pub claim: String,
    pub expected: Expectation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub info: PresetInfo,
    pub command: Command,
    pub config: RunConfig,
}

fn ball() -> DomainSpec {
    DomainSpec::ball(3, 1.0)
}

/// `amplitude · cos(π r)`: continuous and sign-changing on the unit ball.
fn cosine_mu(amplitude: f64) -> MuFieldSpec {
    let n = 65;
    let x: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let y = x
        .iter()
        .map(|r| amplitude * (std::f64::consts::PI * r).cos())
        .collect();
    MuFieldSpec::Radial {
        profile: Table::new(x, y, Tail::Constant).expect("valid table"),
    }
}

fn large_outside(inside: f64, outside: f64) -> MuFieldSpec {
    MuFieldSpec::Piecewise {
        region: InnerRegion::Ball { radius: 0.5 },
        inside,
        outside,
    }
}

fn problem(lambda: f64, p: f64, g: GradientCoefSpec) -> ProblemSpec {
    ProblemSpec::new(ball(), lambda, NonlinearitySpec::power(p), g)
}

fn preset(
    name: &str,
    claim: &str,
    expected: Expectation,
    command: Command,
    problem: ProblemSpec,
    tweak: impl FnOnce(&mut RunConfig),
) -> Preset {
    let mut config = RunConfig::new(problem);
    config.resolution = Resolution::radial(400);
    tweak(&mut config);
    Preset {
        info: PresetInfo {
            name: name.to_string(),
            claim: claim.to_string(),
            expected,
        },
        command,
        config,
    }
}

/// Every preset, in a fixed order.
pub fn presets() -> Vec<Preset> {
    use Expectation::*;
    let bump = |radius| SourceSpec::Bump {
        radius,
        amplitude: 10.0,
    };
    vec![
        preset(
            "source-small-mu",
            "source problem -Δu + μ|∇u|²/u = h with 0 ≤ μ, sup μ < 1 and h ≥ 0 nontrivial: a unique finite-energy solution exists",
            SolutionExists,
            Command::Solve,
            ProblemSpec {
                source: Some(bump(0.5)),
                ..problem(0.0, 3.0, GradientCoefSpec::model(0.4, 1.0, 0.0))
            },
            |_| {},
        ),
        preset(
            "source-large-mu-outside",
            "source problem with μ ≥ τ > 1 and h = 0 outside ω ⊂⊂ Ω: no solution",
            NoSolution,
            Command::Solve,
            ProblemSpec {
                source: Some(bump(0.25)),
                ..problem(
                    0.0,
                    3.0,
                    GradientCoefSpec::model_field(large_outside(0.3, 2.0), 1.0, 0.0),
                )
            },
            |c| c.method = Method::FixedPoint,
        ),
        preset(
            "gamma1-bounded-mu",
            "γ = 1, continuous sign-changing μ with τ ≤ μ ≤ σ, 2σ-1 < τ ≤ σ < σ₁: a solution exists for every λ > 0",
            SolutionExists,
            Command::Solve,
            problem(
                1.0,
                3.0,
                GradientCoefSpec::model_field(cosine_mu(0.3), 1.0, 0.0).with_bounds(-0.3, 0.3),
            ),
            |_| {},
        ),
        preset(
            "gamma1-singular-large-mu",
            "γ = 1, δ = 0, μ ≥ τ > 1 outside ω ⊂⊂ Ω: no solution for any λ > 0",
            NoSolution,
            Command::Solve,
            problem(
                1.0,
                3.0,
                GradientCoefSpec::model_field(large_outside(0.3, 2.0), 1.0, 0.0),
            ),
            |_| {},
        ),
        preset(
            "strong-small-mu",
            "γ > 1, δ > 0, 2 sup μ⁺ + sup μ⁻ < δ^(γ-1): a finite-energy solution exists for every λ > 0",
            SolutionExists,
            Command::Solve,
            problem(1.0, 3.0, GradientCoefSpec::model(0.4, 2.0, 1.0)),
            |_| {},
        ),
        preset(
            "strong-singular",
            "γ > 1, δ = 0, μ ≥ τ > 0 outside ω ⊂⊂ Ω: no solution for any λ > 0",
            NoSolution,
            Command::Solve,
            problem(
                1.0,
                3.0,
                GradientCoefSpec::model_field(large_outside(0.0, 0.5), 2.0, 0.0),
            ),
            |_| {},
        ),
        preset(
            "large-lambda-low-p",
            "p < (N+1)/(N-1), any bounded μ: solutions exist for large λ and vanish as λ → ∞",
            VanishingForLargeLambda,
            Command::SweepLambda,
            problem(
                1.0,
                1.5,
                GradientCoefSpec::model_field(cosine_mu(0.5), 0.5, 0.0),
            ),
            |c| c.grid = vec![10.0, 100.0, 1000.0],
        ),
        preset(
            "large-lambda-nonnegative-mu",
            "p < 2*-1, continuous μ ≥ 0: solutions exist for large λ and vanish as λ → ∞",
            VanishingForLargeLambda,
            Command::SweepLambda,
            problem(1.0, 2.0, GradientCoefSpec::model(0.5, 0.5, 0.0)),
            |c| c.grid = vec![10.0, 100.0, 1000.0],
        ),
        preset(
            "open-mu-one",
            "γ = 1, δ = 0, μ ≡ 1: open",
            NoAssertedOutcome,
            Command::Solve,
            problem(1.0, 3.0, GradientCoefSpec::model(1.0, 1.0, 0.0)),
            |_| {},
        ),
        preset(
            "open-intermediate-mu",
            "γ = 1, δ > 0, σ₁ ≤ μ < p, small λ: open",
            NoAssertedOutcome,
            Command::Solve,
            problem(0.01, 3.0, GradientCoefSpec::model(1.0, 1.0, 0.5)),
            |_| {},
        ),
    ]
}

pub fn preset_names() -> Vec<String> {
    presets().into_iter().map(|p| p.info.name).collect()
}

pub fn find_preset(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.info.name == name)
}
