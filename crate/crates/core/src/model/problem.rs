//! The full problem specification.

use serde::{Deserialize, Serialize};

use super::domain::{DomainSpec, Point};
use super::functions::{validate_parts, GradientCoefSpec, NonlinearitySpec, SourceSpec};
use crate::{Error, Result};

/// Structural conditions that a spec may declare and `validate_spec` tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Condition {
    /// `s^p <= f(s) <= a (s + δ)^p`.
    FStar,
    /// `f(s)/s^p -> L` at infinity.
    FInfinity,
    /// `f(s)/s -> 0` at zero.
    FZero,
    /// `τ <= (s + δ) g <= σ` with `2σ - 1 < τ <= σ < 1`.
    GStar,
    /// `max μ < σ₁`, read off `s g(x, s)` at large `s`.
    GInfinity,
    /// `s g(x, s) <= σ < 1`.
    GOne,
    /// `s ↦ s g(x, s)` nondecreasing.
    GMonotone,
    /// `s g(x, s) >= tau` outside ω for `0 < s < s0`.
    GTwo { tau: f64, s0: f64 },
    /// `0 <= g(x, s) <= G(s)`.
    GMajorant,
    /// `g >= 0`.
    GNonnegative,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::FStar => "f-star",
            Condition::FInfinity => "f-infinity",
            Condition::FZero => "f-zero",
            Condition::GStar => "g-star",
            Condition::GInfinity => "g-infinity",
            Condition::GOne => "g-one",
            Condition::GMonotone => "g-monotone",
            Condition::GTwo { .. } => "g-two",
            Condition::GMajorant => "g-majorant",
            Condition::GNonnegative => "g-nonnegative",
        }
    }
}

/// `-Δu + g(x,u)|∇u|² = λ f(u) + t u^σ_t + h(x)` with `u = 0` on the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub domain: DomainSpec,
    pub lambda: f64,
    pub f: NonlinearitySpec,
    pub g: GradientCoefSpec,
    #[serde(default)]
    pub t: f64,
    #[serde(default = "half")]
    pub sigma_t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceSpec>,
    /// Conditions tested by `validate_spec`; empty means "infer from the declared data".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<Condition>,
}

fn half() -> f64 {
    0.5
}

impl ProblemSpec {
    pub fn new(domain: DomainSpec, lambda: f64, f: NonlinearitySpec, g: GradientCoefSpec) -> Self {
        ProblemSpec {
            domain,
            lambda,
            f,
            g,
            t: 0.0,
            sigma_t: 0.5,
            source: None,
            conditions: Vec::new(),
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        ProblemSpec {
            lambda,
            ..self.clone()
        }
    }

    pub fn with_t(&self, t: f64) -> Self {
        ProblemSpec { t, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "lambda = {} must be >= 0",
                self.lambda
            )));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidSpec(format!("t = {} must be >= 0", self.t)));
        }
        validate_parts(&self.domain, &self.f, &self.g, self.source.as_ref())?;
        if self.t > 0.0 {
            if !(self.sigma_t > 0.0 && self.sigma_t < 1.0) {
                return Err(Error::InvalidSpec(format!(
                    "sigma_t = {} must lie in (0, 1)",
                    self.sigma_t
                )));
            }
            if let Some(s) = self.g.sigma {
                if (s - self.sigma_t).abs() > 1e-12 {
                    return Err(Error::InvalidSpec(format!(
                        "sigma_t = {} differs from the declared sigma = {s} of g",
                        self.sigma_t
                    )));
                }
            }
        }
        Ok(())
    }

    /// Right-hand side `λ f(s) + t s^σ_t + h(x)` and its `s`-derivative.
    pub fn rhs_with_slope(&self, x: &Point, s: f64) -> Result<(f64, f64)> {
        let mut v = 0.0;
        let mut d = 0.0;
        if self.lambda != 0.0 {
            let (fv, fd) = self.f.eval_with_slope(s)?;
            v += self.lambda * fv;
            d += self.lambda * fd;
        }
        if self.t != 0.0 {
            if s < 0.0 {
                return Err(Error::Domain {
                    node: None,
                    s,
                    what: "fractional power of a negative argument",
                });
            }
            if s > 0.0 {
                let w = self.t * s.powf(self.sigma_t);
                v += w;
                d += self.sigma_t * w / s;
            }
        }
        if let Some(h) = &self.source {
            v += h.eval(x)?;
        }
        Ok((v, d))
    }

    /// Exponent used for the scaled norm `λ^{1/(p-1)} ‖u‖∞`.
    pub fn scaled_norm(&self, sup: f64) -> f64 {
        self.lambda.powf(1.0 / (self.f.p - 1.0)) * sup
    }

    /// Conditions to check: the declared list, or those implied by the data present.
    pub fn effective_conditions(&self) -> Vec<Condition> {
        if !self.conditions.is_empty() {
            return self.conditions.clone();
        }
        let mut v = vec![Condition::FStar];
        if self.f.limit.is_some() {
            v.push(Condition::FInfinity);
        }
        if self.f.vanishes_at_zero {
            v.push(Condition::FZero);
        }
        if self.g.tau.is_some() && self.g.sigma.is_some() {
            v.push(Condition::GStar);
        }
        if self.g.nonnegative {
            v.push(Condition::GNonnegative);
        }
        if self.g.majorant.is_some() {
            v.push(Condition::GMajorant);
        }
        v
    }
}
