//! Fixtures with known conformal volume and the minimal hypersurfaces used
//! for the index bound.

use std::f64::consts::PI;

use super::report::VcValue;
use super::schro::IndexEntry;
use crate::confvol::SphereImmersion;
use crate::error::Result;
use crate::geomcore::fixtures::{clifford_torus, icosphere};
use crate::geomcore::{Ambient, Fixture, TriangleMesh};

/// Conformal volume of the natural immersion of a fixture when it is known
/// in closed form. Minimal immersions into spheres maximize volume in their
/// Moebius orbit, so their conformal volume is their volume.
pub fn known_vc(fixture: &Fixture) -> Option<VcValue> {
    match fixture {
        Fixture::Icosphere { .. } => Some(VcValue::exact(4.0 * PI, "round S^2")),
        Fixture::CliffordTorus { .. } => Some(VcValue::exact(2.0 * PI * PI, "minimal Clifford torus, V_c = Vol")),
        Fixture::Veronese { .. } => Some(VcValue::exact(6.0 * PI, "minimal Veronese surface, V_c = Vol")),
        Fixture::RoundRp2DoubleCover { .. } => {
            Some(VcValue::exact(12.0 * PI, "minimal double cover of the Veronese surface, V_c = Vol"))
        }
        Fixture::FlatTorus { .. } | Fixture::RevolutionTorus { .. } => None,
    }
}

/// The fixture is minimal in its ambient sphere.
pub fn is_minimal_in_sphere(fixture: &Fixture) -> bool {
    known_vc(fixture).is_some()
}

/// The inclusion for meshes in a unit sphere, the stereographic lift for
/// meshes in Euclidean space, nothing for abstract metrics.
pub fn natural_immersion(mesh: &TriangleMesh) -> Result<Option<SphereImmersion>> {
    match mesh.ambient() {
        Ambient::UnitSphere(_) => Ok(Some(SphereImmersion::inclusion(mesh)?)),
        Ambient::Euclidean(_) => Ok(Some(SphereImmersion::stereographic_lift(mesh)?)),
        Ambient::Abstract => Ok(None),
    }
}

/// Dimension `m` of the target sphere of [`natural_immersion`].
pub fn target_sphere_dim(mesh: &TriangleMesh) -> usize {
    match mesh.ambient() {
        Ambient::UnitSphere(m) | Ambient::Euclidean(m) => m.max(2),
        Ambient::Abstract => 2,
    }
}

/// Minimal hypersurface of `S^3` for a fixture, with its `|S|^2`.
pub fn index_entry(fixture: &Fixture, mesh: &TriangleMesh) -> Option<IndexEntry> {
    let shape = match fixture {
        // The equator S^2 of S^3 is totally geodesic.
        Fixture::Icosphere { .. } => 0.0,
        Fixture::CliffordTorus { .. } => 2.0,
        _ => return None,
    };
    Some(IndexEntry {
        name: fixture.to_string(),
        mesh: mesh.clone(),
        shape_sq: vec![shape; mesh.n_vertices()],
        n: 2,
    })
}

/// The shipped minimal hypersurfaces: equator and Clifford torus.
pub fn index_catalog(level: u32, n: usize) -> Result<Vec<IndexEntry>> {
    let sphere = icosphere(level)?;
    let torus = clifford_torus(n)?;
    Ok(vec![
        index_entry(&Fixture::Icosphere { level }, &sphere).expect("catalog entry"),
        index_entry(&Fixture::CliffordTorus { n }, &torus).expect("catalog entry"),
    ])
}
