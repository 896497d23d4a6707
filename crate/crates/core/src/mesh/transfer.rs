//! Transfer of fields between nested meshes.

use super::{DiscreteField, Grid2D, Mesh, RadialMesh};

/// Coarsest radial mesh used for nested iteration.
const MIN_RADIAL: usize = 64;
/// Coarsest grid side used for nested iteration.
const MIN_SIDE: usize = 15;

/// The mesh with doubled spacing whose nodes are a subset of `mesh`, if it
/// exists and is not too coarse.
pub fn coarsen(mesh: &Mesh) -> Option<Mesh> {
    match mesh {
        Mesh::Radial(m) => {
            if m.intervals % 2 != 0 || m.intervals / 2 < MIN_RADIAL {
                return None;
            }
            let c = match m.kind {
                super::RadialKind::Ball => RadialMesh::ball(m.dimension, m.r1, m.intervals / 2),
                super::RadialKind::Annulus if m.dimension == 1 => {
                    RadialMesh::interval(m.r0, m.r1, m.intervals / 2)
                }
                super::RadialKind::Annulus => {
                    RadialMesh::annulus(m.dimension, m.r0, m.r1, m.intervals / 2)
                }
            };
            c.ok().map(Mesh::Radial)
        }
        Mesh::Grid(g) => {
            if g.nx % 2 == 0
                || g.ny % 2 == 0
                || (g.nx - 1) / 2 < MIN_SIDE
                || (g.ny - 1) / 2 < MIN_SIDE
            {
                return None;
            }
            Grid2D::new(g.lx, g.ly, (g.nx - 1) / 2, (g.ny - 1) / 2)
                .ok()
                .map(Mesh::Grid)
        }
    }
}

/// Injection of a fine field onto the nested coarse mesh.
pub fn restrict(fine: &Mesh, coarse: &Mesh, u: &DiscreteField) -> DiscreteField {
    let v = u.values();
    let out = match (fine, coarse) {
        (Mesh::Radial(_), Mesh::Radial(c)) => (0..c.node_count()).map(|i| v[2 * i]).collect(),
        (Mesh::Grid(f), Mesh::Grid(c)) => (0..c.node_count())
            .map(|k| {
                let (i, j) = c.ij(k);
                v[f.index(2 * i, 2 * j)]
            })
            .collect(),
        _ => panic!("restrict between different mesh kinds"),
    };
    DiscreteField::from_vec(out)
}

/// Linear (bilinear on grids) interpolation of a coarse field onto the nested fine mesh.
pub fn prolong(coarse: &Mesh, fine: &Mesh, u: &DiscreteField) -> DiscreteField {
    let v = u.values();
    let out = match (coarse, fine) {
        (Mesh::Radial(_), Mesh::Radial(f)) => (0..f.node_count())
            .map(|i| {
                if i % 2 == 0 {
                    v[i / 2]
                } else {
                    0.5 * (v[i / 2] + v[i / 2 + 1])
                }
            })
            .collect(),
        (Mesh::Grid(c), Mesh::Grid(f)) => (0..f.node_count())
            .map(|k| {
                let (i, j) = f.ij(k);
                let (i0, i1) = (i / 2, i.div_ceil(2));
                let (j0, j1) = (j / 2, j.div_ceil(2));
                0.25 * (v[c.index(i0, j0)]
                    + v[c.index(i1, j0)]
                    + v[c.index(i0, j1)]
                    + v[c.index(i1, j1)])
            })
            .collect(),
        _ => panic!("prolong between different mesh kinds"),
    };
    DiscreteField::from_vec(out)
}
