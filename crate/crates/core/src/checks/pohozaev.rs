//! Pohozaev defect of a radial field on a ball.

use serde::{Deserialize, Serialize};

use crate::mesh::{check_radial, gradient_sq, sphere_area, DiscreteField, Mesh, RadialKind};
use crate::{Error, Result};

/// The three terms of the identity and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevTerms {
    /// `((N-2)/2) ∫|∇v|²`.
    pub gradient: f64,
    /// `(N/(q+1)) ∫ v^{q+1}`.
    pub potential: f64,
    /// `(1/2) ∮ (x·ν)(∂v/∂ν)²`.
    pub boundary: f64,
    /// `gradient - potential + boundary`.
    pub defect: f64,
}

/// `D = ((N-2)/2)∫|∇v|² - (N/(q+1))∫v^{q+1} + (1/2)∮(x·ν)(∂v/∂ν)²`, which
/// vanishes for solutions of `-Δv = v^q` on a ball.
///
/// Integrals use the trapezoid rule; `∂v/∂ν` is the three-point one-sided
/// difference at `r = R`.
pub fn pohozaev_terms(mesh: &Mesh, v: &DiscreteField, q: f64) -> Result<PohozaevTerms> {
    let m = check_radial(mesh)?;
    if m.kind != RadialKind::Ball {
        return Err(Error::InvalidSpec(
            "the Pohozaev defect needs a ball".into(),
        ));
    }
    v.check(mesh)?;
    let n = m.dimension as f64;
    let grad = gradient_sq(mesh, v)?;
    let power: Vec<f64> = v
        .values()
        .iter()
        .map(|x| x.max(0.0).powf(q + 1.0))
        .collect();
    let u = v.values();
    let last = m.intervals;
    let dv = (3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) / (2.0 * m.h);
    let radius = m.r1;
    let gradient = 0.5 * (n - 2.0) * mesh.integrate(grad.values());
    let potential = n / (q + 1.0) * mesh.integrate(&power);
    let boundary =
        0.5 * radius * sphere_area(m.dimension) * radius.powi(m.dimension as i32 - 1) * dv * dv;
    Ok(PohozaevTerms {
        gradient,
        potential,
        boundary,
        defect: gradient - potential + boundary,
    })
}

pub fn pohozaev_defect(mesh: &Mesh, v: &DiscreteField, q: f64) -> Result<f64> {
    pohozaev_terms(mesh, v, q).map(|t| t.defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Resolution;
    use crate::model::DomainSpec;
    use crate::quad::simpson;

    #[test]
    fn zero_field_has_zero_defect() {
        let mesh = Mesh::build(&DomainSpec::ball(3, 1.0), &Resolution::radial(64)).unwrap();
        assert_eq!(
            pohozaev_defect(&mesh, &DiscreteField::zeros(&mesh), 3.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn manufactured_field_matches_dense_quadrature() {
        let (n, q) = (3usize, 3.0);
        let mesh = Mesh::build(&DomainSpec::ball(n, 1.0), &Resolution::radial(4000)).unwrap();
        let v = DiscreteField::from_fn(&mesh, |p| 1.0 - p.rho * p.rho);
        let area = sphere_area(n);
        let nf = n as f64;
        let rn = |r: f64| r.powi(n as i32 - 1);
        let g = simpson(&|r: f64| 4.0 * r * r * rn(r), 0.0, 1.0, 1e-14).unwrap();
        let p = simpson(
            &|r: f64| (1.0 - r * r).powf(q + 1.0) * rn(r),
            0.0,
            1.0,
            1e-14,
        )
        .unwrap();
        let exact = area * (0.5 * (nf - 2.0) * g - nf / (q + 1.0) * p + 0.5 * 4.0);
        let d = pohozaev_defect(&mesh, &v, q).unwrap();
        assert!((d - exact).abs() < 1e-6, "{d} vs {exact}");
    }

    #[test]
    fn non_ball_is_rejected() {
        let mesh = Mesh::build(&DomainSpec::annulus(3, 0.5, 1.0), &Resolution::radial(64)).unwrap();
        assert!(pohozaev_defect(&mesh, &DiscreteField::zeros(&mesh), 3.0).is_err());
        let grid = Mesh::build(
            &DomainSpec::rectangle(1.0, 1.0),
            &Resolution {
                intervals: 0,
                nx: 15,
                ny: 15,
            },
        )
        .unwrap();
        assert!(pohozaev_defect(&grid, &DiscreteField::zeros(&grid), 3.0).is_err());
    }
}
