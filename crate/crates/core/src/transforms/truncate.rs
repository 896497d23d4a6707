//! Truncations that freeze `s·g` and `f/s^p` above a level.

use super::gamma::GSplit;
use super::map::{FieldMap, TransformMeta, TransformedProblem};
use super::sample::{geometric_nodes, hermite_table, sample};
use crate::model::{
    FVariant, GVariant, GradientCoefSpec, NonlinearitySpec, ProblemSpec, Table, Tail,
};
use crate::{Error, Result};

/// Smallest tabulated argument, relative to the truncation level.
const REL_LO: f64 = 1e-9;

/// `ḡ = g` below `level`, `level·g(x, level)/s` above, as a tabulated
/// `(μ A + B)/s` with constant tails.
fn truncate_g(g: &GradientCoefSpec, level: f64) -> Result<GradientCoefSpec> {
    if matches!(g.variant, GVariant::ConstantOverS { .. }) || g.is_zero() {
        return Ok(g.clone());
    }
    let split = GSplit::new(g);
    let nodes = geometric_nodes(REL_LO * level, level);
    let times_s = |f: (f64, f64), s: f64| (s * f.0, f.0 + s * f.1);
    let (ay, ad) = sample(&nodes, |s| Ok(times_s(split.a(s)?, s)))?;
    let (by, bd) = sample(&nodes, |s| Ok(times_s(split.b(s)?, s)))?;
    let has_b = by.iter().any(|v| *v != 0.0);
    let a = hermite_table(nodes.clone(), ay, ad, Some(Tail::Constant))?;
    let b = if has_b {
        Some(hermite_table(nodes, by, bd, Some(Tail::Constant))?)
    } else {
        None
    };
    Ok(GradientCoefSpec {
        variant: GVariant::Table {
            mu: split.mu,
            shift: 0.0,
            power: 1.0,
            a,
            b,
        },
        ..g.clone()
    })
}

fn check_level(level: f64, what: &str) -> Result<()> {
    if level > 0.0 && level.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "{what} = {level} must be positive"
        )))
    }
}

/// Replace `g` and `f` above `s0 ∈ (0, 1)` by `s0 g(x,s0)/s` and `f(s0)(s/s0)^p`.
/// Solutions bounded by `s0` solve both problems, so the map is the identity.
pub fn truncate_at_s0(spec: &ProblemSpec, s0: f64) -> Result<TransformedProblem> {
    spec.validate()?;
    if !(s0 > 0.0 && s0 < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "truncation level s0 = {s0} must lie in (0, 1)"
        )));
    }
    let mut new = spec.clone();
    new.g = truncate_g(&spec.g, s0)?;
    if !matches!(spec.f.variant, FVariant::PurePower) {
        let nodes = geometric_nodes(REL_LO * s0, s0);
        let (y, d) = sample(&nodes, |s| spec.f.eval_with_slope(s))?;
        let table: Table = hermite_table(nodes, y, d, Some(Tail::Power { exponent: spec.f.p }))?;
        new.f = NonlinearitySpec {
            variant: FVariant::Table { table },
            ..spec.f.clone()
        };
    }
    let mut meta = TransformMeta::named("truncate-s0");
    meta.level = Some(s0);
    Ok(TransformedProblem {
        spec: new,
        map: FieldMap::Identity,
        transform: meta,
    })
}

/// Replace `g` above `level` by `level·g(x, level)/s`; `f` is unchanged.
pub fn truncate_at_delta(spec: &ProblemSpec, level: f64) -> Result<TransformedProblem> {
    spec.validate()?;
    check_level(level, "truncation level")?;
    let mut new = spec.clone();
    new.g = truncate_g(&spec.g, level)?;
    let mut meta = TransformMeta::named("truncate-delta");
    meta.level = Some(level);
    meta.delta = Some(level);
    Ok(TransformedProblem {
        spec: new,
        map: FieldMap::Identity,
        transform: meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DomainSpec, MuFieldSpec, Point};

    fn x0() -> Point {
        Point {
            x: 0.0,
            y: 0.0,
            rho: 0.0,
        }
    }

    fn spec(g: GradientCoefSpec, f: NonlinearitySpec) -> ProblemSpec {
        ProblemSpec::new(DomainSpec::ball(3, 1.0), 1.0, f, g)
    }

    #[test]
    fn constant_over_s_and_pure_power_are_invariant() {
        let s = spec(
            GradientCoefSpec::constant_over_s(0.4),
            NonlinearitySpec::power(3.0),
        );
        assert_eq!(truncate_at_s0(&s, 0.3).unwrap().spec, s);
        assert_eq!(truncate_at_delta(&s, 0.3).unwrap().spec, s);
    }

    #[test]
    fn barred_functions_follow_their_definitions() {
        let mut f = NonlinearitySpec::power(3.0);
        f.variant = FVariant::ShiftedPower {
            coef: 1.0,
            shift: 0.2,
        };
        let g = GradientCoefSpec::model(0.7, 1.5, 0.1);
        let s = spec(g.clone(), f.clone());
        let s0 = 0.4;
        let tp = truncate_at_s0(&s, s0).unwrap();
        for k in 0..80 {
            let v = 1e-5 * 1.25f64.powi(k);
            let (g_bar, f_bar) = if v < s0 {
                (g.eval(&x0(), v).unwrap(), f.eval(v).unwrap())
            } else {
                (
                    s0 * g.eval(&x0(), s0).unwrap() / v,
                    f.eval(s0).unwrap() * (v / s0).powf(3.0),
                )
            };
            let gg = tp.spec.g.eval(&x0(), v).unwrap();
            let ff = tp.spec.f.eval(v).unwrap();
            assert!(
                (gg - g_bar).abs() <= 1e-9 * g_bar.abs(),
                "g at {v}: {gg} vs {g_bar}"
            );
            assert!(
                (ff - f_bar).abs() <= 1e-9 * f_bar.abs(),
                "f at {v}: {ff} vs {f_bar}"
            );
        }
    }

    #[test]
    fn s_times_g_is_continuous_at_the_level() {
        let mu = MuFieldSpec::constant(0.5);
        for g in [
            GradientCoefSpec::model(0.5, 1.0, 0.2),
            GradientCoefSpec::model(-0.3, 0.5, 0.0),
            GradientCoefSpec::model_field(mu, 3.0, 1.0),
        ] {
            let s = spec(g, NonlinearitySpec::power(2.0));
            for level in [0.05, 0.5, 0.9] {
                for tp in [
                    truncate_at_s0(&s, level).unwrap(),
                    truncate_at_delta(&s, level).unwrap(),
                ] {
                    let eps = 1e-9 * level;
                    let below = (level - eps) * tp.spec.g.eval(&x0(), level - eps).unwrap();
                    let above = (level + eps) * tp.spec.g.eval(&x0(), level + eps).unwrap();
                    assert!((below - above).abs() < 1e-7 * below.abs().max(1e-12));
                }
            }
        }
    }

    #[test]
    fn level_outside_unit_interval_is_rejected() {
        let s = spec(
            GradientCoefSpec::model(0.5, 1.0, 0.2),
            NonlinearitySpec::power(2.0),
        );
        assert!(truncate_at_s0(&s, 1.5).is_err());
        assert!(truncate_at_delta(&s, 0.0).is_err());
    }
}
