use serde::Serialize;

use crate::error::{Error, Result};
use crate::geomcore::{conformal_distortion, Ambient, DistortionReport, TriangleMesh};
use crate::moebius::MoebiusMap;
use crate::packing::{pushforward_measure, DiscreteMeasure};
use crate::vector::{dist, heron, norm, spherical_triangle_area};

/// Piecewise-linear map of a surface mesh into the unit sphere S^m, with a
/// set of faces treated as singular and excluded from volume integrals.
#[derive(Debug, Clone, Serialize)]
pub struct SphereImmersion {
    #[serde(skip)]
    pub mesh: TriangleMesh,
    /// Flat unit vectors, `dim` per vertex.
    pub images: Vec<f64>,
    /// Ambient dimension `m + 1`.
    pub dim: usize,
    pub singular_faces: Vec<usize>,
    pub distortion: DistortionReport,
}

impl SphereImmersion {
    pub fn new(mesh: TriangleMesh, images: Vec<f64>, dim: usize) -> Result<Self> {
        let n = mesh.n_vertices();
        if dim < 3 || images.len() != n * dim {
            return Err(Error::DimensionMismatch { expected: n * dim, got: images.len() });
        }
        if let Some(i) = images.chunks(dim).position(|p| (norm(p) - 1.0).abs() > 1e-9) {
            return Err(Error::InvalidParameter(format!("image of vertex {i} is not a unit vector")));
        }
        let distortion = conformal_distortion(&mesh, &images, dim)?;
        let singular_faces = distortion.singular_faces.clone();
        Ok(SphereImmersion { mesh, images, dim, singular_faces, distortion })
    }

    /// Inclusion of a mesh that already lies on a unit sphere.
    pub fn inclusion(mesh: &TriangleMesh) -> Result<Self> {
        match mesh.ambient() {
            Ambient::UnitSphere(m) => SphereImmersion::new(mesh.clone(), mesh.coords().to_vec(), m + 1),
            _ => Err(Error::InvalidParameter("inclusion needs a mesh on a unit sphere".into())),
        }
    }

    /// Composition with the inverse stereographic chart
    /// `x -> (2x, |x|^2 - 1) / (1 + |x|^2)` of a mesh in R^m.
    pub fn stereographic_lift(mesh: &TriangleMesh) -> Result<Self> {
        let Ambient::Euclidean(d) = mesh.ambient() else {
            return Err(Error::InvalidParameter("stereographic lift needs a Euclidean mesh".into()));
        };
        let mut images = Vec::with_capacity(mesh.n_vertices() * (d + 1));
        for (i, x) in mesh.coords().chunks(d).enumerate() {
            if x.iter().any(|c| !c.is_finite()) {
                return Err(Error::ProjectionSingular { vertex: i });
            }
            images.extend(inverse_chart(x));
        }
        SphereImmersion::new(mesh.clone(), images, d + 1)
    }

    /// Marks additional faces as singular.
    pub fn with_singular_faces(mut self, faces: impl IntoIterator<Item = usize>) -> Result<Self> {
        for f in faces {
            if f >= self.mesh.n_faces() {
                return Err(Error::InvalidParameter(format!("face {f} out of range")));
            }
            self.singular_faces.push(f);
        }
        self.singular_faces.sort_unstable();
        self.singular_faces.dedup();
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.mesh.n_vertices()
    }

    pub fn image(&self, i: usize) -> &[f64] {
        &self.images[i * self.dim..(i + 1) * self.dim]
    }

    /// Sphere dimension `m`.
    pub fn sphere_dim(&self) -> usize {
        self.dim - 1
    }

    /// Domain area of the singular faces.
    pub fn singular_area(&self) -> f64 {
        self.singular_faces.iter().map(|&f| self.mesh.face_area(f)).sum()
    }

    /// Images under `s o phi`.
    pub fn composed_images(&self, s: &MoebiusMap) -> Vec<f64> {
        s.apply_all(&self.images)
    }

    /// Push-forward of the vertex areas, optionally weighted.
    pub fn pushforward(&self, density: Option<&[f64]>) -> Result<DiscreteMeasure> {
        pushforward_measure(&self.mesh, &self.images, self.dim, density)
    }

    pub(crate) fn regular_mask(&self) -> Vec<bool> {
        let mut regular = vec![true; self.mesh.n_faces()];
        self.singular_faces.iter().for_each(|&f| regular[f] = false);
        regular
    }
}

/// Inverse stereographic chart R^m -> S^m with pole at the last axis.
pub fn inverse_chart(x: &[f64]) -> Vec<f64> {
    let r2: f64 = x.iter().map(|c| c * c).sum();
    let s = 1.0 / (1.0 + r2);
    x.iter().map(|c| 2.0 * c * s).chain(std::iter::once((r2 - 1.0) * s)).collect()
}

/// Sum of the spherical areas of the image triangles over regular faces.
pub(crate) fn image_volume(imm: &SphereImmersion, images: &[f64], regular: &[bool]) -> f64 {
    let d = imm.dim;
    let pt = |i: usize| &images[i * d..(i + 1) * d];
    imm.mesh
        .faces()
        .iter()
        .zip(regular)
        .filter(|(_, r)| **r)
        .map(|(f, _)| spherical_triangle_area(pt(f[0]), pt(f[1]), pt(f[2])))
        .sum()
}

/// Volume of the metric pulled back by `s o phi`, with each face replaced
/// by the spherical triangle spanned by its image vertices. Singular faces
/// contribute nothing.
pub fn pullback_volume(imm: &SphereImmersion, s: &MoebiusMap) -> Result<f64> {
    if s.pole.coords().len() != imm.dim {
        return Err(Error::DimensionMismatch { expected: imm.dim, got: s.pole.coords().len() });
    }
    if imm.singular_faces.len() == imm.mesh.n_faces() {
        return Err(Error::AllFacesSingular);
    }
    Ok(image_volume(imm, &imm.composed_images(s), &imm.regular_mask()))
}

/// Map of S^2 raising the stereographic coordinate (projection from `-e_3`)
/// to the power `d`: a branched cover of degree `d`, singular at the poles.
pub fn power_map(q: &[f64], d: u32) -> Vec<f64> {
    let rho = q[0].hypot(q[1]);
    if rho == 0.0 {
        return q.to_vec();
    }
    let angle = q[1].atan2(q[0]) * d as f64;
    // tan(theta / 2) for the polar angle from e_3, in a cancellation-free form.
    let u = if q[2] >= 0.0 { rho / (1.0 + q[2]) } else { (1.0 - q[2]) / rho };
    let v = u.powi(d as i32);
    let (cos_t, sin_t) = if v.is_finite() {
        ((1.0 - v * v) / (1.0 + v * v), 2.0 * v / (1.0 + v * v))
    } else {
        (-1.0, 0.0)
    };
    vec![sin_t * angle.cos(), sin_t * angle.sin(), cos_t]
}

/// The icosphere (or any mesh on S^2) composed with [`power_map`]; faces
/// touching the two branch points are marked singular.
pub fn power_immersion(mesh: &TriangleMesh, d: u32) -> Result<SphereImmersion> {
    if mesh.ambient() != Ambient::UnitSphere(2) {
        return Err(Error::InvalidParameter("power map needs a mesh on S^2".into()));
    }
    let images: Vec<f64> = mesh.coords().chunks(3).flat_map(|q| power_map(q, d)).collect();
    let branch: Vec<bool> = mesh.coords().chunks(3).map(|q| q[0].hypot(q[1]) < 1e-12).collect();
    let singular: Vec<usize> = mesh
        .faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.iter().any(|&v| branch[v]))
        .map(|(i, _)| i)
        .collect();
    SphereImmersion::new(mesh.clone(), images, 3)?.with_singular_faces(singular)
}

/// Flat (chordal) area of the image triangles of `s o phi` over regular
/// faces. Its gap to [`pullback_volume`] measures the quadrature error of
/// the discrete volume.
pub fn chordal_volume(imm: &SphereImmersion, s: &MoebiusMap) -> f64 {
    let images = imm.composed_images(s);
    let d = imm.dim;
    let pt = |i: usize| &images[i * d..(i + 1) * d];
    imm.mesh
        .faces()
        .iter()
        .zip(imm.regular_mask())
        .filter(|(_, r)| *r)
        .map(|(f, _)| heron(dist(pt(f[0]), pt(f[1])), dist(pt(f[1]), pt(f[2])), dist(pt(f[2]), pt(f[0]))))
        .sum()
}
