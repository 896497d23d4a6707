//! The change of unknown `ψ(s) = ∫₀ˢ exp(-∫_α^t μ/(r+δ)^γ dr) dt`.

use serde::{Deserialize, Serialize};

use crate::quad::{simpson, TOL};
use crate::{Error, Result};

/// Parameters of ψ for the model coefficient `μ/(s+δ)^γ` with constant μ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiParams {
    pub mu: f64,
    pub delta: f64,
    pub gamma: f64,
    /// Lower limit α of the inner integral.
    pub anchor: f64,
}

impl PsiParams {
    /// Anchor 0 when the inner kernel is integrable there, 1 otherwise.
    pub fn new(mu: f64, delta: f64, gamma: f64) -> Self {
        let anchor = if delta > 0.0 || gamma < 1.0 { 0.0 } else { 1.0 };
        PsiParams {
            mu,
            delta,
            gamma,
            anchor,
        }
    }

    pub fn with_anchor(self, anchor: f64) -> Self {
        PsiParams { anchor, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.mu.is_finite() && self.delta >= 0.0 && self.gamma > 0.0 && self.anchor >= 0.0;
        if !ok {
            return Err(Error::InvalidSpec(format!("bad psi parameters {self:?}")));
        }
        if self.mu != 0.0 && self.anchor + self.delta == 0.0 && self.gamma >= 1.0 {
            return Err(domain(0.0, "inner kernel not integrable at the anchor"));
        }
        // near t = 0 the integrand exp(-I(t)) behaves like t^{-μ} (γ = 1) or
        // exp(c t^{1-γ}) (γ > 1) when δ = 0
        if self.delta == 0.0
            && self.mu > 0.0
            && (self.gamma > 1.0 || (self.gamma == 1.0 && self.mu >= 1.0))
        {
            return Err(domain(0.0, "psi integrand not integrable at zero"));
        }
        Ok(())
    }

    /// `g(s) = μ/(s+δ)^γ`.
    pub fn g(&self, s: f64) -> f64 {
        if self.mu == 0.0 {
            0.0
        } else {
            self.mu * (s + self.delta).powf(-self.gamma)
        }
    }

    /// Inner integral `I(t) = ∫_α^t g`.
    pub fn inner(&self, t: f64) -> f64 {
        if self.mu == 0.0 {
            return 0.0;
        }
        let (a, b) = (self.anchor + self.delta, t + self.delta);
        if self.gamma == 1.0 {
            self.mu * (b / a).ln()
        } else {
            let e = 1.0 - self.gamma;
            self.mu * (b.powf(e) - a.powf(e)) / e
        }
    }

    /// `ψ'(s) = exp(-I(s))`.
    pub fn derivative(&self, s: f64) -> f64 {
        (-self.inner(s)).exp()
    }
}

fn domain(s: f64, what: &'static str) -> Error {
    Error::Domain {
        node: None,
        s,
        what,
    }
}

/// `ψ(s)`, in closed form when `γ = 1` or `μ = 0`, by adaptive Simpson otherwise.
pub fn psi_forward(params: &PsiParams, s: f64) -> Result<f64> {
    params.validate()?;
    if !(s >= 0.0) {
        return Err(domain(s, "psi of a negative argument"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let PsiParams {
        mu,
        delta,
        gamma,
        anchor,
    } = *params;
    if mu == 0.0 {
        return Ok(s);
    }
    if gamma == 1.0 {
        let c = (anchor + delta).powf(mu);
        let e = 1.0 - mu;
        return Ok(if delta > 0.0 {
            // δ^{1-μ} ((1 + s/δ)^{1-μ} - 1) / (1-μ), written to avoid cancellation
            let l = (s / delta).ln_1p();
            if e == 0.0 {
                c * l
            } else {
                c * delta.powf(e) * (e * l).exp_m1() / e
            }
        } else {
            c * s.powf(e) / e
        });
    }
    integrate_derivative(params, 0.0, s)
}

/// `∫_a^b ψ'` by adaptive Simpson, in the log variable above 1.
///
/// The absolute tolerance is scaled by a coarse estimate of the integral when
/// that exceeds 1, so that large values of ψ are computed to relative 1e-12.
fn integrate_derivative(params: &PsiParams, a: f64, b: f64) -> Result<f64> {
    let f = |t: f64| params.derivative(t);
    let mut total = 0.0;
    let split = b.min(1.0).max(a);
    if split > a {
        total += simpson(&f, a, split, TOL * magnitude(&f, a, split))?;
    }
    if b > split {
        let g = |x: f64| {
            let t = x.exp();
            t * params.derivative(t)
        };
        let (la, lb) = (split.ln(), b.ln());
        total += simpson(&g, la, lb, TOL * magnitude(&g, la, lb))?;
    }
    if !total.is_finite() {
        return Err(domain(b, "psi overflows"));
    }
    Ok(total)
}

fn magnitude<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let m = (0..=8)
        .map(|k| f(a + (b - a) * k as f64 / 8.0).abs())
        .fold(0.0, f64::max);
    ((b - a) * m).max(1.0)
}

/// `ψ⁻¹(y)` by safeguarded Newton on a bracket.
pub fn psi_inverse(params: &PsiParams, y: f64) -> Result<f64> {
    params.validate()?;
    if !(y >= 0.0) || !y.is_finite() {
        return Err(domain(y, "psi inverse outside the range"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if params.mu == 0.0 {
        return Ok(y);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while psi_forward(params, hi)? < y {
        lo = hi;
        hi *= 4.0;
        if hi > 1e300 {
            return Err(domain(y, "psi inverse beyond the computed range"));
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = psi_forward(params, s)? - y;
        if v.abs() <= 1e-15 * y.max(1.0) {
            return Ok(s);
        }
        if v > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let newton = s - v / params.derivative(s);
        s = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(s);
        }
    }
    Ok(s)
}

/// Running values of ψ on an increasing grid starting at 0, by summing
/// the integral over consecutive cells.
pub(crate) fn psi_on_grid(params: &PsiParams, s: &[f64]) -> Result<Vec<f64>> {
    params.validate()?;
    if params.mu == 0.0 || params.gamma == 1.0 {
        return s.iter().map(|&v| psi_forward(params, v)).collect();
    }
    let mut out = Vec::with_capacity(s.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &v in s {
        if v > prev {
            acc += integrate_derivative(params, prev, v)?;
        }
        out.push(acc);
        prev = v;
    }
    Ok(out)
}
