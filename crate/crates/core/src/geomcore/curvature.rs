use super::mesh::{Ambient, TriangleMesh};
use crate::error::{Error, Result};
use crate::vector::dot;

/// Per-vertex mean curvature vectors, flat with `dim` entries per vertex.
#[derive(Debug, Clone)]
pub struct MeanCurvature {
    pub dim: usize,
    /// Mean curvature vector in the ambient Euclidean space.
    pub vectors: Vec<f64>,
    /// For sphere meshes, the component tangent to the sphere (mean
    /// curvature inside S^m).
    pub tangential: Option<Vec<f64>>,
    pub vertex_areas: Vec<f64>,
}

impl MeanCurvature {
    pub fn at(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.chunks(self.dim).map(|h| dot(h, h).sqrt()).collect()
    }

    pub fn squared_norms(&self) -> Vec<f64> {
        self.vectors.chunks(self.dim).map(|h| dot(h, h)).collect()
    }

    pub fn tangential_norms(&self) -> Option<Vec<f64>> {
        self.tangential
            .as_ref()
            .map(|t| t.chunks(self.dim).map(|h| dot(h, h).sqrt()).collect())
    }
}

/// Sum of face areas.
pub fn total_volume(mesh: &TriangleMesh) -> f64 {
    mesh.total_area()
}

/// Cotangent Laplacian applied to a vector field with `dim` components per
/// vertex: `(K x)_i = sum_j w_ij (x_i - x_j)`.
pub(crate) fn apply_cotan(mesh: &TriangleMesh, x: &[f64], dim: usize) -> Vec<f64> {
    let w = mesh.cotan_weights();
    let mut out = vec![0.0; x.len()];
    for (e, &[a, b]) in mesh.edges().iter().enumerate() {
        for c in 0..dim {
            let d = w[e] * (x[a * dim + c] - x[b * dim + c]);
            out[a * dim + c] += d;
            out[b * dim + c] -= d;
        }
    }
    out
}

/// Mean curvature vector `H_i = -(K x)_i / (2 A_i)`; on the unit sphere in
/// R^3 this points inward with norm 1.
pub fn mean_curvature(mesh: &TriangleMesh) -> Result<MeanCurvature> {
    if !mesh.ambient().has_coordinates() {
        return Err(Error::NoAmbientCoordinates);
    }
    let dim = mesh.dim();
    let areas = mesh.vertex_areas();
    let mut h = apply_cotan(mesh, mesh.coords(), dim);
    for (i, hi) in h.chunks_mut(dim).enumerate() {
        let s = -1.0 / (2.0 * areas[i]);
        hi.iter_mut().for_each(|x| *x *= s);
    }
    let tangential = match mesh.ambient() {
        Ambient::UnitSphere(_) => {
            let mut t = h.clone();
            for (i, ti) in t.chunks_mut(dim).enumerate() {
                let x = mesh.vertex(i);
                let radial = dot(ti, x);
                ti.iter_mut().zip(x).for_each(|(a, b)| *a -= radial * b);
            }
            Some(t)
        }
        _ => None,
    };
    Ok(MeanCurvature { dim, vectors: h, tangential, vertex_areas: areas })
}

/// Area-weighted sum of `|H|^2` over the vertices.
pub fn willmore_energy(mesh: &TriangleMesh) -> Result<f64> {
    let h = mean_curvature(mesh)?;
    Ok(h
        .squared_norms()
        .iter()
        .zip(&h.vertex_areas)
        .map(|(h2, a)| h2 * a)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{flat_torus, icosphere};
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_curvature_points_inward() {
        let m = icosphere(3).unwrap();
        let h = mean_curvature(&m).unwrap();
        for i in 0..m.n_vertices() {
            let radial = dot(h.at(i), m.vertex(i));
            assert!(radial < -0.97 && radial > -1.03, "vertex {i}: {radial}");
        }
        let w = willmore_energy(&m).unwrap();
        assert!((w - 4.0 * PI).abs() < 0.03 * 4.0 * PI);
    }

    #[test]
    fn abstract_mesh_has_no_curvature() {
        let t = flat_torus(1.0, 1.0, 4).unwrap();
        assert!(matches!(willmore_energy(&t), Err(Error::NoAmbientCoordinates)));
    }
}
