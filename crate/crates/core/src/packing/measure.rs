use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geomcore::TriangleMesh;
use crate::vector::norm;

/// Finite weighted point set on the unit sphere S^m.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    /// Ambient dimension `m + 1`.
    pub dim: usize,
    /// Flat support coordinates, `dim` per point.
    pub support: Vec<f64>,
    pub weights: Vec<f64>,
    pub total: f64,
}

impl DiscreteMeasure {
    pub fn new(dim: usize, support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim < 2 || support.len() != dim * weights.len() {
            return Err(Error::DimensionMismatch { expected: dim * weights.len(), got: support.len() });
        }
        if weights.is_empty() {
            return Err(Error::InvalidParameter("measure has empty support".into()));
        }
        for (i, p) in support.chunks(dim).enumerate() {
            if (norm(p) - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!("support point {i} is not on the unit sphere")));
            }
        }
        if let Some(i) = weights.iter().position(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight {i} is not positive ({})",
                weights[i]
            )));
        }
        let total = weights.iter().sum();
        Ok(DiscreteMeasure { dim, support, weights, total })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.support[i * self.dim..(i + 1) * self.dim]
    }

    /// Largest mass carried by a single location, as a fraction of the
    /// total. Support points closer than `1e-12` count as one location.
    pub fn atom_fraction(&self) -> f64 {
        let mut atoms: HashMap<Vec<i64>, f64> = HashMap::new();
        for i in 0..self.len() {
            let key = self.point(i).iter().map(|x| (x * 1e12).round() as i64).collect();
            *atoms.entry(key).or_default() += self.weights[i];
        }
        atoms.values().cloned().fold(0.0, f64::max) / self.total
    }

    /// Same support with all weights multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        DiscreteMeasure::new(self.dim, self.support.clone(), self.weights.iter().map(|w| w * s).collect())
    }

    /// Mass of the points satisfying `pred`.
    pub fn mass_where(&self, pred: impl Fn(&[f64]) -> bool) -> f64 {
        (0..self.len()).filter(|&i| pred(self.point(i))).map(|i| self.weights[i]).sum()
    }
}

/// Push-forward of the vertex areas of `mesh` under the vertex map `images`
/// (unit vectors of dimension `dim`), optionally weighted by a density.
/// Vertices with zero density are dropped; negative density is an error.
pub fn pushforward_measure(
    mesh: &TriangleMesh,
    images: &[f64],
    dim: usize,
    density: Option<&[f64]>,
) -> Result<DiscreteMeasure> {
    let n = mesh.n_vertices();
    if images.len() != n * dim {
        return Err(Error::DimensionMismatch { expected: n * dim, got: images.len() });
    }
    if let Some(d) = density {
        if d.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: d.len() });
        }
        if let Some(i) = d.iter().position(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(Error::NegativePotential { vertex: i, value: d[i] });
        }
    }
    let areas = mesh.vertex_areas();
    let mut support = Vec::with_capacity(images.len());
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let w = areas[i] * density.map_or(1.0, |d| d[i]);
        if w > 0.0 {
            support.extend_from_slice(&images[i * dim..(i + 1) * dim]);
            weights.push(w);
        }
    }
    DiscreteMeasure::new(dim, support, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomcore::fixtures::icosphere;

    #[test]
    fn identity_pushforward_has_full_area() {
        let m = icosphere(3).unwrap();
        let mu = pushforward_measure(&m, m.coords(), 3, None).unwrap();
        assert!((mu.total - m.total_area()).abs() < 1e-12);
        let twice = pushforward_measure(&m, m.coords(), 3, Some(&vec![2.0; m.n_vertices()])).unwrap();
        assert!((twice.total - 2.0 * mu.total).abs() < 1e-12);
    }

    #[test]
    fn collapsed_images_form_one_atom() {
        let m = icosphere(1).unwrap();
        let img: Vec<f64> = (0..m.n_vertices()).flat_map(|_| [0.0, 0.0, 1.0]).collect();
        let mu = pushforward_measure(&m, &img, 3, None).unwrap();
        assert!((mu.atom_fraction() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_density_is_rejected() {
        let m = icosphere(1).unwrap();
        let mut d = vec![1.0; m.n_vertices()];
        d[3] = -0.5;
        assert!(matches!(
            pushforward_measure(&m, m.coords(), 3, Some(&d)),
            Err(Error::NegativePotential { vertex: 3, .. })
        ));
    }
}
