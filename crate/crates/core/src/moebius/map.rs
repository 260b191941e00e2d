use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{dot, norm};

/// Unit vector in R^(m+1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    /// Accepts coordinates whose norm is 1 within `1e-12`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let r = norm(&coords);
        if coords.len() < 2 || (r - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "not a unit vector (dimension {}, norm {r})",
                coords.len()
            )));
        }
        Ok(SpherePoint(coords))
    }

    /// Normalizes a non-zero vector.
    pub fn from_direction(v: &[f64]) -> Result<Self> {
        let r = norm(v);
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero vector".into()));
        }
        Ok(SpherePoint(v.iter().map(|x| x / r).collect()))
    }

    /// Basis vector `e_i` of R^(m+1).
    pub fn basis(m: usize, i: usize) -> Self {
        let mut v = vec![0.0; m + 1];
        v[i] = 1.0;
        SpherePoint(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Dimension `m` of the sphere.
    pub fn sphere_dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn antipode(&self) -> Self {
        SpherePoint(self.0.iter().map(|x| -x).collect())
    }
}

/// Geodesic distance on the unit sphere.
pub fn geodesic_distance(x: &[f64], y: &[f64]) -> f64 {
    dot(x, y).clamp(-1.0, 1.0).acos()
}

/// Stereographic projection from `p` onto the hyperplane `{x . p = 0}`,
/// returned in ambient coordinates. A point at angle `theta` from `p` lands
/// at radius `cot(theta / 2)`.
pub fn stereographic(p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    let qp = dot(q, p);
    let den = 1.0 - qp;
    if den <= 1e-300 {
        return Err(Error::ProjectionPole);
    }
    Ok(q.iter().zip(p).map(|(a, b)| (a - qp * b) / den).collect())
}

/// Inverse of [`stereographic`]; `v` must be orthogonal to `p`.
pub fn inverse_stereographic(p: &[f64], v: &[f64]) -> Vec<f64> {
    let rho2 = dot(v, v);
    let s = 1.0 / (rho2 + 1.0);
    v.iter().zip(p).map(|(a, b)| s * (2.0 * a + (rho2 - 1.0) * b)).collect()
}

/// Splits `q` as `cos(theta) p + w` with `|w| = sin(theta)` and returns
/// `(cos theta, w, tan(theta / 2))`; the half-angle tangent is infinite at
/// `q = -p`.
fn polar(p: &[f64], q: &[f64]) -> (f64, Vec<f64>, f64) {
    let c = dot(q, p).clamp(-1.0, 1.0);
    let w: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - c * b).collect();
    let s = norm(&w);
    let u = if c >= 0.0 {
        s / (1.0 + c)
    } else if s > 0.0 {
        (1.0 - c) / s
    } else {
        f64::INFINITY
    };
    (c, w, u)
}

/// The dilation `xi_{p,t}`: stereographic projection from `p`, scaling by
/// `t`, and projecting back. Fixes `p` and `-p`; for `t > 1` it pushes points
/// towards `p`.
pub fn xi_map(p: &[f64], t: f64, q: &[f64]) -> Vec<f64> {
    let (_, w, u) = polar(p, q);
    if u == 0.0 {
        return q.to_vec();
    }
    if u.is_infinite() {
        return p.iter().map(|x| -x).collect();
    }
    // Stereographic radius is 1/u, so scaling by t divides u by t.
    let v = u / t;
    let cos_new = (1.0 - v * v) / (1.0 + v * v);
    let w_scale = (1.0 + u * u) / (t * (1.0 + v * v));
    let mut out: Vec<f64> = p.iter().zip(&w).map(|(a, b)| cos_new * a + w_scale * b).collect();
    // Remove the last ulp of drift off the sphere.
    let r = norm(&out);
    out.iter_mut().for_each(|x| *x /= r);
    out
}

/// `x_p(xi_{p,t}(q))` computed from the half-angle tangent alone.
pub(crate) fn xi_height(p: &[f64], t: f64, q: &[f64]) -> f64 {
    let (_, _, u) = polar(p, q);
    if u.is_infinite() {
        return -1.0;
    }
    let v = u / t;
    (1.0 - v * v) / (1.0 + v * v)
}

/// Conformal diffeomorphism `q -> rotation * xi_{pole,t}(q)` of S^m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    /// Row-major orthogonal matrix.
    pub rotation: Vec<Vec<f64>>,
    pub pole: SpherePoint,
    pub t: f64,
}

impl MoebiusMap {
    pub fn new(rotation: Vec<Vec<f64>>, pole: SpherePoint, t: f64) -> Result<Self> {
        let d = pole.coords().len();
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("dilation must be positive, got {t}")));
        }
        if rotation.len() != d || rotation.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: rotation.len() });
        }
        for i in 0..d {
            for j in 0..d {
                let g = dot(&rotation[i], &rotation[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > 1e-12 {
                    return Err(Error::InvalidParameter("rotation is not orthogonal".into()));
                }
            }
        }
        Ok(MoebiusMap { rotation, pole, t })
    }

    pub fn identity(m: usize) -> Self {
        let d = m + 1;
        let rotation = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        MoebiusMap { rotation, pole: SpherePoint::basis(m, 0), t: 1.0 }
    }

    /// Pure dilation `xi_{p,t}`.
    pub fn dilation(pole: SpherePoint, t: f64) -> Result<Self> {
        let m = pole.sphere_dim();
        let id = MoebiusMap::identity(m);
        MoebiusMap::new(id.rotation, pole, t)
    }

    pub fn apply(&self, q: &[f64]) -> Vec<f64> {
        let x = if self.t == 1.0 { q.to_vec() } else { xi_map(self.pole.coords(), self.t, q) };
        self.rotation.iter().map(|row| dot(row, &x)).collect()
    }

    /// Applies the map to a flat array of points.
    pub fn apply_all(&self, points: &[f64]) -> Vec<f64> {
        let d = self.pole.coords().len();
        points.chunks(d).flat_map(|q| self.apply(q)).collect()
    }
}

/// Fold map: the identity on the closed hemisphere `{q . p >= 0}` and the
/// reflection `q - 2 (q . p) p` on the other half.
pub fn fold_map(p: &[f64], q: &[f64]) -> Vec<f64> {
    let qp = dot(q, p);
    if qp >= 0.0 {
        q.to_vec()
    } else {
        q.iter().zip(p).map(|(a, b)| a - 2.0 * qp * b).collect()
    }
}
