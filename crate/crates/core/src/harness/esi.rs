//! Pointwise curvature identity for the composition of a surface in R^m
//! with the inverse stereographic chart `Pi`, whose conformal factor is
//! `Pi^* g_can = e^f h` with `e^f = 4 / (1 + |x|^2)^2`.
//!
//! For `n = 2` the identity reads
//! `|H|^2 = e^f (|H_Pi|^2 + 1) + (1/2) Delta f`
//! with `Delta = div grad` on the surface.

use serde::Serialize;

use super::firsteig::quadrature_defect;
use super::report::{ErrorBars, InequalityReport};
use crate::confvol::{chordal_volume, SphereImmersion};
use crate::error::{Error, Result};
use crate::geomcore::{fixtures::icosphere, mean_curvature, Ambient, TriangleMesh};
use crate::moebius::MoebiusMap;
use crate::spectral::assemble_laplacian;

#[derive(Debug, Clone, Serialize)]
pub struct EsiReport {
    /// `sqrt(\int r^2)` of the pointwise residual.
    pub residual_l2: f64,
    pub residual_max: f64,
    #[serde(skip)]
    pub residual: Vec<f64>,
    /// `(n - 2) / (4n)`, the coefficient of `|grad f|^2`; zero for surfaces.
    pub middle_coefficient: f64,
    /// `\int |H|^2 >= (1/n) \int |grad(Pi o phi)|^2`.
    pub integrated: InequalityReport,
}

/// Area-weighted average of the face tangent projectors at each vertex,
/// row-major `d x d`.
fn tangent_projectors(mesh: &TriangleMesh, d: usize) -> Vec<Vec<f64>> {
    let x = mesh.coords();
    let mut proj = vec![vec![0.0; d * d]; mesh.n_vertices()];
    let mut weight = vec![0.0; mesh.n_vertices()];
    for (fi, f) in mesh.faces().iter().enumerate() {
        let p = |k: usize| &x[f[k] * d..(f[k] + 1) * d];
        let e1: Vec<f64> = p(1).iter().zip(p(0)).map(|(a, b)| a - b).collect();
        let e2: Vec<f64> = p(2).iter().zip(p(0)).map(|(a, b)| a - b).collect();
        let n1 = e1.iter().map(|a| a * a).sum::<f64>().sqrt();
        let u: Vec<f64> = e1.iter().map(|a| a / n1).collect();
        let along: f64 = e2.iter().zip(&u).map(|(a, b)| a * b).sum();
        let w: Vec<f64> = e2.iter().zip(&u).map(|(a, b)| a - along * b).collect();
        let nw = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        let v: Vec<f64> = w.iter().map(|a| a / nw).collect();
        let area = mesh.face_area(fi);
        for &vi in f {
            for r in 0..d {
                for s in 0..d {
                    proj[vi][r * d + s] += area * (u[r] * u[s] + v[r] * v[s]);
                }
            }
            weight[vi] += area;
        }
    }
    for (p, w) in proj.iter_mut().zip(&weight) {
        p.iter_mut().for_each(|a| *a /= w);
    }
    proj
}

/// Residual of the identity at every vertex of a surface in R^m.
///
/// `|H|^2` and `|H_Pi|^2` come from the cotangent mean curvature of the
/// mesh and of its lift; `Delta f` is evaluated by the chain rule
/// `tr(P Hess f) + 2 <grad f, H>` with the analytic derivatives of the
/// chart factor, since the cotangent Laplacian of a general function is not
/// pointwise consistent.
pub fn esi_residual(mesh: &TriangleMesh, fixture: &str) -> Result<EsiReport> {
    let Ambient::Euclidean(d) = mesh.ambient() else {
        return Err(Error::InvalidParameter("curvature identity needs a Euclidean mesh".into()));
    };
    let n = 2.0;
    let imm = SphereImmersion::stereographic_lift(mesh)?;
    let lifted = TriangleMesh::new(imm.images.clone(), mesh.faces().to_vec(), Ambient::UnitSphere(d))?;
    let h = mean_curvature(mesh)?;
    let h_lift = mean_curvature(&lifted)?.tangential_norms().ok_or(Error::NoAmbientCoordinates)?;
    let proj = tangent_projectors(mesh, d);

    let mut residual = Vec::with_capacity(mesh.n_vertices());
    for i in 0..mesh.n_vertices() {
        let x = mesh.vertex(i);
        let s = 1.0 + x.iter().map(|a| a * a).sum::<f64>();
        let ef = 4.0 / (s * s);
        // f = ln 4 - 2 ln(1 + |x|^2): grad f = -4x/s, Hess f = -4I/s + 8 x x^T / s^2.
        let mut tr_p = 0.0;
        let mut xpx = 0.0;
        for r in 0..d {
            tr_p += proj[i][r * d + r];
            for c in 0..d {
                xpx += x[r] * proj[i][r * d + c] * x[c];
            }
        }
        let grad_dot_h: f64 = x.iter().zip(h.at(i)).map(|(a, b)| -4.0 * a / s * b).sum();
        let lap_f = -4.0 * tr_p / s + 8.0 * xpx / (s * s) + n * grad_dot_h;
        let hsq: f64 = h.at(i).iter().map(|a| a * a).sum();
        residual.push(hsq - (ef * (h_lift[i] * h_lift[i] + 1.0) + lap_f / n));
    }
    let areas = &h.vertex_areas;
    let residual_l2 = residual.iter().zip(areas).map(|(r, a)| a * r * r).sum::<f64>().sqrt();
    let residual_max = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));

    let ops = assemble_laplacian(mesh)?;
    let mut energy = 0.0;
    for c in 0..=d {
        let u: Vec<f64> = (0..mesh.n_vertices()).map(|i| imm.images[i * (d + 1) + c]).collect();
        energy += ops.energy(&u);
    }
    let willmore: f64 = h.squared_norms().iter().zip(areas).map(|(s, a)| s * a).sum();
    let identity = MoebiusMap::identity(d);
    // A conformal map has energy n times its image area; the excess of the
    // discrete map is its conformal distortion.
    let bars = ErrorBars {
        distortion: (energy / n - chordal_volume(&imm, &identity)).max(0.0),
        quadrature: quadrature_defect(&imm, &identity)? * willmore,
        ..Default::default()
    };
    let integrated = InequalityReport::new(
        "esi_integrated",
        fixture,
        (energy / n, "(1/n) int |grad(Pi o phi)|^2"),
        (willmore, "int |H|^2"),
        bars,
    );
    Ok(EsiReport { residual_l2, residual_max, residual, middle_coefficient: (n - 2.0) / (4.0 * n), integrated })
}

#[derive(Debug, Clone, Serialize)]
pub struct EsiStudy {
    pub levels: Vec<u32>,
    pub residual_l2: Vec<f64>,
    /// `l2[i] / l2[i + 1]`.
    pub ratios: Vec<f64>,
}

/// Residual of the identity on translated unit icospheres of increasing
/// level.
pub fn esi_refinement_study(levels: &[u32], offset: &[f64; 3]) -> Result<EsiStudy> {
    let mut l2 = Vec::with_capacity(levels.len());
    for &l in levels {
        let mesh = icosphere(l)?.as_euclidean()?.translated(offset)?;
        l2.push(esi_residual(&mesh, &format!("icosphere:{l}"))?.residual_l2);
    }
    let ratios = l2.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(EsiStudy { levels: levels.to_vec(), residual_l2: l2, ratios })
}
