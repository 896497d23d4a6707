//! Manufactured sub/supersolution pairs shared by the integration tests.

use gradlab::mesh::{residual_parts, DiscreteField, Mesh, ResidualKind, Resolution};
use gradlab::model::{
    DomainSpec, GradientCoefSpec, NonlinearitySpec, ProblemSpec, SourceSpec, Table, Tail,
};
use gradlab::nonlinear::{newton_solve, Discretization, SolverConfig};

pub fn ball() -> DomainSpec {
    DomainSpec::ball(3, 1.0)
}

/// `-Δ_h v + g |∇_h v|²` at every node (boundary nodes copy their neighbour).
pub fn operator_field(spec: &ProblemSpec, mesh: &Mesh, v: &DiscreteField) -> Vec<f64> {
    let parts = residual_parts(spec, mesh, v, ResidualKind::Quasilinear).unwrap();
    let mut out = vec![f64::NAN; mesh.node_count()];
    for (j, k) in mesh.unknowns().into_iter().enumerate() {
        out[k] = -parts.laplacian[j] + parts.gradient_term[j];
    }
    for k in (0..out.len()).rev() {
        if out[k].is_nan() {
            out[k] = out[k - 1];
        }
    }
    out
}

pub struct Manufactured {
    pub spec: ProblemSpec,
    pub disc: Discretization,
    pub u: DiscreteField,
    pub v: DiscreteField,
    pub h: DiscreteField,
}

/// `v = a (1 - r²)(1 + b r²)`, `h_v = A(v)`, `u` solving `A(u) = h_v - 6aε`,
/// and the sandwich `h = h_v - 3aε`, for `g = σ/s`.
pub fn manufactured(sigma: f64, a: f64, b: f64, eps: f64, m: usize) -> Manufactured {
    let disc = Discretization::new(&ball(), &Resolution::radial(m)).unwrap();
    let mesh = &disc.mesh;
    let v = DiscreteField::from_fn(mesh, |p| {
        let r2 = p.rho * p.rho;
        a * (1.0 - r2) * (1.0 + b * r2)
    });
    let mut spec = ProblemSpec::new(
        ball(),
        0.0,
        NonlinearitySpec::power(3.0),
        GradientCoefSpec::constant_over_s(sigma),
    );
    let hv = operator_field(&spec, mesh, &v);
    let radii: Vec<f64> = (0..mesh.node_count()).map(|k| mesh.point(k).rho).collect();
    let rhs: Vec<f64> = hv.iter().map(|x| x - 6.0 * a * eps).collect();
    spec.source = Some(SourceSpec::Radial {
        profile: Table::new(radii, rhs, Tail::Constant).unwrap(),
    });
    let r = newton_solve(
        &disc,
        &spec,
        ResidualKind::Quasilinear,
        &v.scaled(1.0 - 0.5 * eps),
        &SolverConfig::default(),
    )
    .unwrap();
    assert!(r.converged(), "{:?}", r.message);
    let u = r.solution.unwrap();
    let h = DiscreteField::new(mesh, hv.iter().map(|x| x - 3.0 * a * eps).collect()).unwrap();
    Manufactured {
        spec,
        disc,
        u,
        v,
        h,
    }
}
