//! The power change `v = (u+δ)^γ - δ^γ`, `γ > 1`, which lowers the growth
//! exponent to `p_γ = (γ-1+p)/γ` and moves `(s+δ)g` bounds toward 1.

use serde::{Deserialize, Serialize};

use super::map::{gamma_inverse, FieldMap, TransformMeta, TransformedProblem};
use super::sample::{geometric_nodes, hermite_table, sample};
use crate::model::{
    FVariant, GVariant, GradientCoefSpec, MuFieldSpec, NonlinearitySpec, ProblemSpec, Tail,
};
use crate::{Error, Result};

const S_LO: f64 = 1e-9;
const S_HI: f64 = 1e6;
/// Safety factor applied to the sampled supremum when `b` is automatic.
pub const AUTO_B_FACTOR: f64 = 1.01;

/// How the factor `b` of `f_γ = b (s+δ^γ)^{(γ-1)/γ} f(u)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GammaScale {
    Fixed {
        b: f64,
    },
    /// Smallest `b` with `f_γ(s) ≥ s^{p_γ}` on the sample grid, times 1.01.
    Auto,
}

/// `g(x, s) = μ(x) a(s) + b(s)` with `a`, `b` and their slopes.
pub(crate) struct GSplit<'a> {
    pub mu: MuFieldSpec,
    g: &'a GradientCoefSpec,
}

impl GSplit<'_> {
    pub(crate) fn new(g: &GradientCoefSpec) -> GSplit<'_> {
        let mu = match &g.variant {
            GVariant::ModelSingular { mu, .. } | GVariant::Table { mu, .. } => mu.clone(),
            GVariant::ConstantOverS { value } => MuFieldSpec::constant(*value),
        };
        GSplit { mu, g }
    }

    pub(crate) fn a(&self, s: f64) -> Result<(f64, f64)> {
        match &self.g.variant {
            GVariant::ModelSingular { gamma, .. } => {
                let base = s + self.g.delta;
                let v = base.powf(-gamma);
                Ok((v, -gamma * v / base))
            }
            GVariant::ConstantOverS { .. } => Ok((1.0 / s, -1.0 / (s * s))),
            GVariant::Table {
                shift, power, a, ..
            } => over_power(a.eval_with_slope(s)?, s + shift, *power),
        }
    }

    pub(crate) fn b(&self, s: f64) -> Result<(f64, f64)> {
        match &self.g.variant {
            GVariant::Table {
                shift,
                power,
                b: Some(b),
                ..
            } => over_power(b.eval_with_slope(s)?, s + shift, *power),
            _ => Ok((0.0, 0.0)),
        }
    }
}

fn over_power((v, d): (f64, f64), base: f64, power: f64) -> Result<(f64, f64)> {
    let w = base.powf(-power);
    Ok((v * w, d * w - power * v * w / base))
}

/// Apply the γ-transform. The new spec has `λ_γ = λγ/b`, `f_γ`, `g_γ`
/// tabulated, `δ_γ = δ^γ`, and transported bounds `(τ+γ-1)/γ`, `(σ+γ-1)/γ`.
pub fn gamma_transform(
    spec: &ProblemSpec,
    gamma: f64,
    scale: GammaScale,
) -> Result<TransformedProblem> {
    spec.validate()?;
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::UnsupportedTransform(format!(
            "gamma transform needs gamma > 1, got {gamma}"
        )));
    }
    if spec.t != 0.0 || spec.source.as_ref().is_some_and(|h| !h.is_zero()) {
        return Err(Error::UnsupportedTransform(
            "gamma transform applies to -Δu + g|∇u|² = λf(u) only".into(),
        ));
    }
    let delta = spec.g.delta;
    let dg = delta.powf(gamma);
    let pg = (gamma - 1.0 + spec.f.p) / gamma;
    let map = FieldMap::Gamma { gamma, delta };

    // w = u + δ as a function of the new unknown s, and dw/ds
    let hi = S_HI.min(spec.f.support_end().powf(gamma));
    let nodes = geometric_nodes(S_LO, hi);
    let w_of = |s: f64| {
        let u = gamma_inverse(gamma, delta, s);
        let w = u + delta;
        (
            u,
            w,
            if w > 0.0 {
                w.powf(1.0 - gamma) / gamma
            } else {
                f64::INFINITY
            },
        )
    };
    // F(s) = w^{γ-1} f(u) with slope dF/ds = [(γ-1) f(u)/w + f'(u)] / γ
    let unscaled = |s: f64| -> Result<(f64, f64)> {
        let (u, w, _) = w_of(s);
        let (fv, fd) = spec.f.eval_with_slope(u)?;
        let ratio = if fv == 0.0 { 0.0 } else { fv / w };
        Ok((
            w.powf(gamma - 1.0) * fv,
            ((gamma - 1.0) * ratio + fd) / gamma,
        ))
    };
    let b = match scale {
        GammaScale::Fixed { b } if b > 0.0 && b.is_finite() => b,
        GammaScale::Fixed { b } => {
            return Err(Error::InvalidSpec(format!(
                "gamma transform factor b = {b} must be positive"
            )))
        }
        GammaScale::Auto => {
            let mut sup: f64 = 0.0;
            for s in crate::model::s_grid() {
                if s > hi {
                    break;
                }
                let (fv, _) = unscaled(s)?;
                sup = sup.max(s.powf(pg) / fv);
            }
            if !sup.is_finite() || sup <= 0.0 {
                return Err(Error::UnsupportedTransform(
                    "no finite b makes f_γ dominate s^p_γ on the grid".into(),
                ));
            }
            AUTO_B_FACTOR * sup
        }
    };
    let (fy, fd) = sample(&nodes, |s| unscaled(s).map(|(v, d)| (b * v, b * d)))?;
    let f_table = hermite_table(nodes.clone(), fy, fd, None)?;

    // g_γ = (μ A_γ + B_γ)/(s+δ^γ) with A_γ = w a(u)/γ, B_γ = (w b(u) + γ-1)/γ
    let split = GSplit::new(&spec.g);
    let part = |s: f64, with_a: bool| -> Result<(f64, f64)> {
        let (u, w, dw) = w_of(s);
        let (v, d) = if with_a { split.a(u)? } else { split.b(u)? };
        let extra = if with_a { 0.0 } else { gamma - 1.0 };
        if w == 0.0 {
            return Ok((f64::NAN, f64::NAN));
        }
        // d/ds (w·a(u)) = (a + w a') dw/ds, since du/ds = dw/ds
        Ok(((w * v + extra) / gamma, (v + w * d) * dw / gamma))
    };
    let (ay, ad) = sample(&nodes, |s| part(s, true))?;
    let a_table = hermite_table(nodes.clone(), ay, ad, None)?;
    let b_table = if matches!(spec.g.variant, GVariant::Table { b: Some(_), .. }) {
        let (by, bd) = sample(&nodes, |s| part(s, false))?;
        hermite_table(nodes, by, bd, None)?
    } else {
        let c = (gamma - 1.0) / gamma;
        crate::model::Table::with_slopes(
            vec![0.0, 1.0],
            vec![c, c],
            vec![0.0, 0.0],
            Tail::Constant,
        )?
    };
    let transport = |v: f64| (v + gamma - 1.0) / gamma;
    let g = GradientCoefSpec {
        variant: GVariant::Table {
            mu: split.mu.clone(),
            shift: dg,
            power: 1.0,
            a: a_table,
            b: Some(b_table),
        },
        delta: dg,
        tau: spec.g.tau.map(transport),
        sigma: spec.g.sigma.map(transport),
        nonnegative: spec.g.nonnegative,
        majorant: None,
    };
    let f = NonlinearitySpec {
        variant: FVariant::Table { table: f_table },
        p: pg,
        a: spec.f.a.max(1.0),
        limit: None,
        vanishes_at_zero: spec.f.vanishes_at_zero,
    };
    let mut new = ProblemSpec::new(spec.domain.clone(), spec.lambda * gamma / b, f, g);
    new.sigma_t = spec.sigma_t;
    let mut meta = TransformMeta::named("gamma");
    meta.mu = spec.g.constant_mu();
    meta.delta = Some(delta);
    meta.gamma = Some(gamma);
    meta.sigma = spec.g.sigma;
    meta.b = Some(b);
    Ok(TransformedProblem {
        spec: new,
        map,
        transform: meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{two_star, DomainSpec, Point};

    fn spec(mu: f64, delta: f64) -> ProblemSpec {
        ProblemSpec::new(
            DomainSpec::ball(3, 1.0),
            1.5,
            NonlinearitySpec::power(3.0),
            GradientCoefSpec::model(mu, 1.0, delta).with_bounds(mu * 0.5, mu),
        )
    }

    fn x0() -> Point {
        Point {
            x: 0.0,
            y: 0.0,
            rho: 0.0,
        }
    }

    #[test]
    fn gamma_at_most_one_is_rejected() {
        assert!(gamma_transform(&spec(0.3, 0.5), 1.0, GammaScale::Auto).is_err());
    }

    #[test]
    fn near_one_limit_is_close_to_identity() {
        let tp = gamma_transform(&spec(0.3, 0.0), 1.0 + 1e-6, GammaScale::Auto).unwrap();
        assert!((tp.spec.f.p - 3.0).abs() < 1e-5);
        for s in [0.01, 0.5, 2.0] {
            assert!((tp.map.forward(s).unwrap() - s).abs() < 1e-5 * s.max(1.0));
        }
        // δ = 0 and f = s^p give f_γ = b s^{p_γ} exactly, so b = 1.01
        assert!((tp.transform.b.unwrap() - AUTO_B_FACTOR).abs() < 1e-9);
    }

    #[test]
    fn coefficients_match_their_definitions() {
        let (gamma, delta, mu) = (1.8, 0.4, 0.3);
        let s0 = spec(mu, delta);
        let tp = gamma_transform(&s0, gamma, GammaScale::Fixed { b: 2.0 }).unwrap();
        for k in 0..50 {
            let s = 1e-4 * 1.4f64.powi(k);
            let u = gamma_inverse(gamma, delta, s);
            let w = u + delta;
            let f_exact = 2.0 * w.powf(gamma - 1.0) * u.powi(3);
            let f_got = tp.spec.f.eval(s).unwrap();
            assert!((f_got - f_exact).abs() <= 1e-9 * f_exact, "f at {s}");
            let g_exact = (w * mu / w + gamma - 1.0) / (gamma * (s + delta.powf(gamma)));
            let g_got = tp.spec.g.eval(&x0(), s).unwrap();
            assert!((g_got - g_exact).abs() <= 1e-9 * g_exact, "g at {s}");
        }
        assert!((tp.spec.lambda - 1.5 * gamma / 2.0).abs() < 1e-15);
    }

    #[test]
    fn auto_b_dominates_the_power_on_the_grid() {
        let tp = gamma_transform(&spec(0.3, 0.5), 2.0, GammaScale::Auto).unwrap();
        let pg = tp.spec.f.p;
        for s in crate::model::s_grid() {
            assert!(tp.spec.f.eval(s).unwrap() >= s.powf(pg) * (1.0 - 1e-9));
        }
    }

    #[test]
    fn bounds_are_transported() {
        let (gamma, delta) = (2.5, 0.3);
        let mut s0 = spec(0.4, delta);
        s0.g = GradientCoefSpec::model(0.4, 1.0, delta).with_bounds(0.35, 0.4);
        let tp = gamma_transform(&s0, gamma, GammaScale::Auto).unwrap();
        let (lo, hi) = ((0.35 + gamma - 1.0) / gamma, (0.4 + gamma - 1.0) / gamma);
        assert_eq!(tp.spec.g.tau, Some(lo));
        assert_eq!(tp.spec.g.sigma, Some(hi));
        for s in crate::model::s_grid() {
            let v = tp.spec.g.eval_sg(&x0(), s).unwrap();
            assert!(v >= lo - 1e-9 && v <= hi + 1e-9, "{s}: {v}");
        }
    }

    #[test]
    fn thresholds_map_consistently() {
        for n in 3..=8usize {
            let crit = two_star(n).unwrap() - 1.0;
            for k in 1..30 {
                let p = 1.0 + (crit - 1.0) * k as f64 / 30.0;
                for gamma in [1.1, 1.7, 3.0, 10.0] {
                    let pg = (gamma - 1.0 + p) / gamma;
                    for j in 0..30 {
                        let mu = -0.5 + 1.5 * j as f64 / 30.0;
                        let lhs = (mu + gamma - 1.0) / gamma < (crit - pg) / (crit - 1.0);
                        let rhs = mu < (crit - p) / (crit - 1.0);
                        let on_edge = ((mu - (crit - p) / (crit - 1.0)).abs()) < 1e-9;
                        assert!(on_edge || lhs == rhs, "n={n} p={p} gamma={gamma} mu={mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn sandwich_is_preserved() {
        for gamma in [1.2, 2.0, 5.0] {
            for (tau, sigma) in [(0.1, 0.3), (0.0, 0.4), (-0.2, 0.35), (0.5, 0.7)] {
                if !(2.0 * sigma - 1.0 < tau && tau <= sigma && sigma < 1.0) {
                    continue;
                }
                let (t, s) = ((tau + gamma - 1.0) / gamma, (sigma + gamma - 1.0) / gamma);
                assert!(2.0 * s - 1.0 < t && t <= s && s < 1.0);
            }
        }
    }
}
