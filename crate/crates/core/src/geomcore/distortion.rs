use serde::Serialize;

use super::mesh::TriangleMesh;
use crate::error::{Error, Result};
use crate::vector::{dot, sub};

/// Per-face conformality of a piecewise-linear map.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    /// Largest `log(s_max / s_min)` over non-singular faces.
    pub max_log_ratio: f64,
    /// `log(s_max / s_min)` per face; `NaN` on singular faces.
    pub per_face: Vec<f64>,
    /// Faces whose image collapses (both singular values ~0).
    pub singular_faces: Vec<usize>,
}

impl DistortionReport {
    /// Maximum distortion ignoring the listed faces as well as singular ones.
    pub fn max_excluding(&self, skip: &[usize]) -> f64 {
        let mut excluded = vec![false; self.per_face.len()];
        skip.iter().for_each(|&f| excluded[f] = true);
        self.per_face
            .iter()
            .enumerate()
            .filter(|(f, d)| !excluded[*f] && d.is_finite())
            .map(|(_, &d)| d)
            .fold(0.0, f64::max)
    }
}

/// Singular values `(s_max, s_min)` of the linear map sending the intrinsic
/// triangle of face `f` onto the image triangle `y0, y1, y2`.
pub(crate) fn face_singular_values(mesh: &TriangleMesh, f: usize, y: [&[f64]; 3]) -> (f64, f64) {
    let [l0, l1, l2] = mesh.face_lengths(f);
    // Domain frame: corner 0 at origin, corner 1 on the x axis.
    let cos0 = ((l1 * l1 + l2 * l2 - l0 * l0) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
    let sin0 = (1.0 - cos0 * cos0).sqrt();
    let (p1x, p2x, p2y) = (l2, l1 * cos0, l1 * sin0);
    let e1 = sub(y[1], y[0]);
    let e2 = sub(y[2], y[0]);
    // D = [e1 e2] P^{-1} with P = [[p1x, p2x], [0, p2y]].
    let inv = [[1.0 / p1x, -p2x / (p1x * p2y)], [0.0, 1.0 / p2y]];
    let c0: Vec<f64> = e1.iter().map(|a| a * inv[0][0]).collect();
    let c1: Vec<f64> = e1.iter().zip(&e2).map(|(a, b)| a * inv[0][1] + b * inv[1][1]).collect();
    let (g00, g01, g11) = (dot(&c0, &c0), dot(&c0, &c1), dot(&c1, &c1));
    let tr = g00 + g11;
    let det = (g00 * g11 - g01 * g01).max(0.0);
    let disc = (0.5 * (g00 - g11)).hypot(g01);
    let big = (tr / 2.0 + disc).max(0.0);
    let small = if big > 0.0 { det / big } else { 0.0 };
    (big.sqrt(), small.sqrt())
}

/// Conformal distortion of the map sending vertex `i` of `mesh` to
/// `images[i * dim..(i + 1) * dim]`.
pub fn conformal_distortion(mesh: &TriangleMesh, images: &[f64], dim: usize) -> Result<DistortionReport> {
    let n = mesh.n_vertices();
    if images.len() != n * dim {
        return Err(Error::DimensionMismatch { expected: n * dim, got: images.len() });
    }
    let img = |i: usize| &images[i * dim..(i + 1) * dim];
    let mut per_face = Vec::with_capacity(mesh.n_faces());
    let mut singular_faces = Vec::new();
    let mut max_log_ratio: f64 = 0.0;
    for (f, face) in mesh.faces().iter().enumerate() {
        let (big, small) = face_singular_values(mesh, f, face.map(img));
        if big < 1e-12 || small < 1e-12 * big {
            singular_faces.push(f);
            per_face.push(f64::NAN);
            continue;
        }
        let d = (big / small).ln();
        max_log_ratio = max_log_ratio.max(d);
        per_face.push(d);
    }
    Ok(DistortionReport { max_log_ratio, per_face, singular_faces })
}
