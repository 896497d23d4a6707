//! The coefficient functions: `f`, `g`, the weight `μ(x)` and the source `h(x)`.

use serde::{Deserialize, Serialize};

use super::domain::{DomainSpec, Point};
use super::table::Table;
use crate::{Error, Result};

/// Inner subdomain ω used by piecewise weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InnerRegion {
    /// Ball of the given radius around the domain centre.
    Ball { radius: f64 },
    /// Axis-aligned box (rectangles only).
    Box { x0: f64, x1: f64, y0: f64, y1: f64 },
}

impl InnerRegion {
    pub fn contains(&self, p: &Point) -> bool {
        match *self {
            InnerRegion::Ball { radius } => p.rho < radius,
            InnerRegion::Box { x0, x1, y0, y1 } => p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1,
        }
    }

    fn validate(&self, domain: &DomainSpec) -> Result<()> {
        let ok = match (*self, domain) {
            (InnerRegion::Ball { radius }, DomainSpec::RadialBall { radius: r, .. }) => {
                radius > 0.0 && radius < *r
            }
            (InnerRegion::Ball { radius }, DomainSpec::RadialAnnulus { inner, outer, .. }) => {
                radius > *inner && radius < *outer
            }
            (InnerRegion::Ball { radius }, DomainSpec::Rectangle { lx, ly }) => {
                radius > 0.0 && radius < 0.5 * lx.min(*ly)
            }
            (InnerRegion::Box { x0, x1, y0, y1 }, DomainSpec::Rectangle { lx, ly }) => {
                0.0 < x0 && x0 < x1 && x1 < *lx && 0.0 < y0 && y0 < y1 && y1 < *ly
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "inner region {self:?} is not strictly interior"
            )))
        }
    }
}

/// The weight μ(x) of the model coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MuFieldSpec {
    Constant {
        value: f64,
    },
    /// Profile in the distance from the domain centre.
    Radial {
        profile: Table,
    },
    /// `inside` on ω, `outside` elsewhere.
    Piecewise {
        region: InnerRegion,
        inside: f64,
        outside: f64,
    },
}

impl MuFieldSpec {
    pub fn constant(value: f64) -> Self {
        MuFieldSpec::Constant { value }
    }

    pub fn eval(&self, p: &Point) -> Result<f64> {
        match self {
            MuFieldSpec::Constant { value } => Ok(*value),
            MuFieldSpec::Radial { profile } => profile.eval(p.rho),
            MuFieldSpec::Piecewise {
                region,
                inside,
                outside,
            } => Ok(if region.contains(p) {
                *inside
            } else {
                *outside
            }),
        }
    }

    /// Infimum and supremum of μ.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            MuFieldSpec::Constant { value } => (*value, *value),
            MuFieldSpec::Radial { profile } => profile.value_range(),
            MuFieldSpec::Piecewise {
                inside, outside, ..
            } => (inside.min(*outside), inside.max(*outside)),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            MuFieldSpec::Constant { value } => Some(*value),
            _ => None,
        }
    }

    pub fn validate(&self, domain: &DomainSpec) -> Result<()> {
        match self {
            MuFieldSpec::Constant { value } if !value.is_finite() => {
                Err(Error::InvalidSpec("mu must be finite".into()))
            }
            MuFieldSpec::Radial { profile } => {
                if profile.start() > 0.0 && domain.is_radial() {
                    if let DomainSpec::RadialAnnulus { inner, .. } = domain {
                        if profile.start() <= *inner {
                            return Ok(());
                        }
                    }
                    return Err(Error::InvalidSpec(
                        "radial mu profile must start at the centre".into(),
                    ));
                }
                Ok(())
            }
            MuFieldSpec::Piecewise { region, .. } => region.validate(domain),
            _ => Ok(()),
        }
    }
}

/// Variants of the superlinear term `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FVariant {
    /// `s^p`.
    PurePower,
    /// `coef * (s + shift)^p`.
    ShiftedPower {
        coef: f64,
        shift: f64,
    },
    Table {
        table: Table,
    },
}

/// The function `f` with its declared growth data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySpec {
    pub variant: FVariant,
    /// Growth exponent.
    pub p: f64,
    /// Constant of the upper bound `f(s) <= a (s + δ)^p`.
    #[serde(default = "one")]
    pub a: f64,
    /// Declared limit of `f(s)/s^p` at infinity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    /// Declares `f(s)/s -> 0` as `s -> 0`.
    #[serde(default)]
    pub vanishes_at_zero: bool,
}

fn one() -> f64 {
    1.0
}

impl NonlinearitySpec {
    pub fn power(p: f64) -> Self {
        NonlinearitySpec {
            variant: FVariant::PurePower,
            p,
            a: 1.0,
            limit: Some(1.0),
            vanishes_at_zero: true,
        }
    }

    pub fn table(table: Table, p: f64) -> Self {
        NonlinearitySpec {
            variant: FVariant::Table { table },
            p,
            a: 1.0,
            limit: None,
            vanishes_at_zero: false,
        }
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.eval_with_slope(s).map(|(v, _)| v)
    }

    /// `f(s)` and `f'(s)`.
    pub fn eval_with_slope(&self, s: f64) -> Result<(f64, f64)> {
        match &self.variant {
            FVariant::PurePower => power_with_slope(1.0, s, self.p),
            FVariant::ShiftedPower { coef, shift } => power_with_slope(*coef, s + shift, self.p),
            FVariant::Table { table } => table.eval_with_slope(s),
        }
    }

    /// Largest argument accepted by [`eval`](Self::eval).
    pub fn support_end(&self) -> f64 {
        match &self.variant {
            FVariant::Table { table } => table.support_end(),
            _ => f64::INFINITY,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "f exponent p = {} must exceed 1",
                self.p
            )));
        }
        if !(self.a >= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "f constant a = {} must be >= 1",
                self.a
            )));
        }
        if let FVariant::ShiftedPower { coef, shift } = self.variant {
            if !(coef > 0.0 && shift >= 0.0) {
                return Err(Error::InvalidSpec(
                    "shifted power needs coef > 0, shift >= 0".into(),
                ));
            }
        }
        Ok(())
    }
}

fn power_with_slope(coef: f64, s: f64, p: f64) -> Result<(f64, f64)> {
    if s > 0.0 {
        let v = coef * s.powf(p);
        Ok((v, p * v / s))
    } else if s == 0.0 {
        Ok((0.0, if p > 1.0 { 0.0 } else { f64::INFINITY }))
    } else {
        Err(Error::Domain {
            node: None,
            s,
            what: "power of a negative argument",
        })
    }
}

/// Variants of the gradient coefficient `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GVariant {
    /// `μ(x) / (s + δ)^γ`.
    ModelSingular { mu: MuFieldSpec, gamma: f64 },
    /// `value / s`.
    ConstantOverS { value: f64 },
    /// `(μ(x) A(s) + B(s)) / (s + shift)^power`, `A`, `B` tabulated.
    Table {
        mu: MuFieldSpec,
        shift: f64,
        power: f64,
        a: Table,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<Table>,
    },
}

/// The function `g` with its declared structural data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradientCoefSpec {
    pub variant: GVariant,
    #[serde(default)]
    pub delta: f64,
    /// Declared lower bound of `(s + δ) g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Declared upper bound of `(s + δ) g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub nonnegative: bool,
    /// Integrable majorant `G(s)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub majorant: Option<Table>,
}

impl GradientCoefSpec {
    /// `μ / (s + δ)^γ` with constant μ.
    pub fn model(mu: f64, gamma: f64, delta: f64) -> Self {
        Self::model_field(MuFieldSpec::constant(mu), gamma, delta)
    }

    pub fn model_field(mu: MuFieldSpec, gamma: f64, delta: f64) -> Self {
        GradientCoefSpec {
            variant: GVariant::ModelSingular { mu, gamma },
            delta,
            tau: None,
            sigma: None,
            nonnegative: false,
            majorant: None,
        }
    }

    /// `σ / s`, with declared bounds τ = σ.
    pub fn constant_over_s(sigma: f64) -> Self {
        GradientCoefSpec {
            variant: GVariant::ConstantOverS { value: sigma },
            delta: 0.0,
            tau: Some(sigma),
            sigma: Some(sigma),
            nonnegative: sigma >= 0.0,
            majorant: None,
        }
    }

    /// `g ≡ 0`.
    pub fn zero() -> Self {
        Self::model(0.0, 1.0, 0.0)
    }

    pub fn with_bounds(mut self, tau: f64, sigma: f64) -> Self {
        self.tau = Some(tau);
        self.sigma = Some(sigma);
        self
    }

    /// True when `g` vanishes identically.
    pub fn is_zero(&self) -> bool {
        match &self.variant {
            GVariant::ModelSingular { mu, .. } => mu.as_constant() == Some(0.0),
            GVariant::ConstantOverS { value } => *value == 0.0,
            GVariant::Table { .. } => false,
        }
    }

    /// Constant weight μ for model coefficients.
    pub fn constant_mu(&self) -> Option<f64> {
        match &self.variant {
            GVariant::ModelSingular { mu, .. } => mu.as_constant(),
            GVariant::ConstantOverS { value } => Some(*value),
            GVariant::Table { .. } => None,
        }
    }

    /// Exponent γ of the model coefficient (1 for `σ/s`).
    pub fn gamma(&self) -> Option<f64> {
        match &self.variant {
            GVariant::ModelSingular { gamma, .. } => Some(*gamma),
            GVariant::ConstantOverS { .. } => Some(1.0),
            GVariant::Table { .. } => None,
        }
    }

    pub fn eval(&self, x: &Point, s: f64) -> Result<f64> {
        self.eval_with_slope(x, s).map(|(v, _)| v)
    }

    /// `g(x, s)` and `∂g/∂s (x, s)`.
    pub fn eval_with_slope(&self, x: &Point, s: f64) -> Result<(f64, f64)> {
        match &self.variant {
            GVariant::ModelSingular { mu, gamma } => {
                let m = mu.eval(x)?;
                if m == 0.0 {
                    return Ok((0.0, 0.0));
                }
                let base = s + self.delta;
                if !(base > 0.0) {
                    return Err(singular(s));
                }
                let g = m * base.powf(-gamma);
                Ok((g, -gamma * g / base))
            }
            GVariant::ConstantOverS { value } => {
                if *value == 0.0 {
                    return Ok((0.0, 0.0));
                }
                if !(s > 0.0) {
                    return Err(singular(s));
                }
                let g = value / s;
                Ok((g, -g / s))
            }
            GVariant::Table {
                mu,
                shift,
                power,
                a,
                b,
            } => {
                let m = mu.eval(x)?;
                let base = s + shift;
                if !(base > 0.0) {
                    return Err(singular(s));
                }
                let (av, ad) = a.eval_with_slope(s)?;
                let (bv, bd) = match b {
                    Some(t) => t.eval_with_slope(s)?,
                    None => (0.0, 0.0),
                };
                let w = base.powf(-power);
                let num = m * av + bv;
                Ok((num * w, (m * ad + bd) * w - power * num * w / base))
            }
        }
    }

    /// `(s + δ) g(x, s)`.
    pub fn eval_sg(&self, x: &Point, s: f64) -> Result<f64> {
        Ok((s + self.delta) * self.eval(x, s)?)
    }

    /// Largest argument accepted by [`eval`](Self::eval).
    pub fn support_end(&self) -> f64 {
        match &self.variant {
            GVariant::Table { a, b, .. } => a
                .support_end()
                .min(b.as_ref().map_or(f64::INFINITY, |t| t.support_end())),
            _ => f64::INFINITY,
        }
    }

    /// Smallest argument accepted by [`eval`](Self::eval).
    pub fn support_start(&self) -> f64 {
        match &self.variant {
            GVariant::Table { a, b, .. } => a.start().max(b.as_ref().map_or(0.0, |t| t.start())),
            _ => 0.0,
        }
    }

    /// The μ field, if the variant has one.
    pub fn mu(&self) -> Option<&MuFieldSpec> {
        match &self.variant {
            GVariant::ModelSingular { mu, .. } | GVariant::Table { mu, .. } => Some(mu),
            GVariant::ConstantOverS { .. } => None,
        }
    }

    fn validate(&self, domain: &DomainSpec) -> Result<()> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "delta = {} must be >= 0",
                self.delta
            )));
        }
        match &self.variant {
            GVariant::ModelSingular { mu, gamma } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidSpec(format!(
                        "gamma = {gamma} must be positive"
                    )));
                }
                mu.validate(domain)?;
            }
            GVariant::ConstantOverS { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidSpec("sigma must be finite".into()));
                }
            }
            GVariant::Table {
                mu, shift, power, ..
            } => {
                if !(*shift >= 0.0 && power.is_finite()) {
                    return Err(Error::InvalidSpec(
                        "table g needs shift >= 0 and finite power".into(),
                    ));
                }
                mu.validate(domain)?;
            }
        }
        if let (Some(t), Some(s)) = (self.tau, self.sigma) {
            if t > s {
                return Err(Error::InvalidSpec(format!(
                    "declared tau = {t} exceeds sigma = {s}"
                )));
            }
        }
        Ok(())
    }
}

fn singular(s: f64) -> Error {
    Error::Domain {
        node: None,
        s,
        what: "singular coefficient at nonpositive argument",
    }
}

/// Source term `h(x)` added to the right-hand side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SourceSpec {
    /// Smooth bump `A exp(1 - 1/(1 - (ρ/r)^2))` supported in the ball of radius `r`.
    Bump {
        radius: f64,
        amplitude: f64,
    },
    Constant {
        value: f64,
    },
    Radial {
        profile: Table,
    },
}

impl SourceSpec {
    pub fn eval(&self, p: &Point) -> Result<f64> {
        match self {
            SourceSpec::Bump { radius, amplitude } => {
                let q = p.rho / radius;
                if q >= 1.0 {
                    Ok(0.0)
                } else {
                    Ok(amplitude * (1.0 - 1.0 / (1.0 - q * q)).exp())
                }
            }
            SourceSpec::Constant { value } => Ok(*value),
            SourceSpec::Radial { profile } => profile.eval(p.rho),
        }
    }

    /// True when `h ≡ 0`.
    pub fn is_zero(&self) -> bool {
        match self {
            SourceSpec::Bump { amplitude, .. } => *amplitude == 0.0,
            SourceSpec::Constant { value } => *value == 0.0,
            SourceSpec::Radial { profile } => profile.y().iter().all(|v| *v == 0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SourceSpec::Bump { radius, amplitude } if !(*radius > 0.0 && amplitude.is_finite()) => {
                Err(Error::InvalidSpec("bump needs positive radius".into()))
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn validate_parts(
    domain: &DomainSpec,
    f: &NonlinearitySpec,
    g: &GradientCoefSpec,
    source: Option<&SourceSpec>,
) -> Result<()> {
    f.validate()?;
    g.validate(domain)?;
    if let Some(h) = source {
        h.validate()?;
    }
    Ok(())
}
