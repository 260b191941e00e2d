use serde::Serialize;

use super::assemble::{assemble_laplacian, OperatorPair};
use super::eigen::{lowest_eigenpairs, natural_scale, EigenOptions};
use super::sparse::{CsrMatrix, LdlFactor};
use crate::error::{Error, Result};
use crate::geomcore::TriangleMesh;

/// Eigenvalues in `(-NEAR_ZERO, 0)` are flagged rather than silently counted.
pub const NEAR_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct NegativeCount {
    /// Eigenvalues of `(K - M V) v = lambda M v` below `-band`.
    pub count: usize,
    /// Eigenvalues in `[-band, band)`, reported separately.
    pub boundary: usize,
    pub band: f64,
    /// True when some eigenvalue lies in `(-1e-9, 0)`.
    pub near_zero_flag: bool,
    /// Same count from the inertia of `K - M V + band M`.
    pub inertia_count: usize,
    /// The lowest eigenvalues, through the first one above the band.
    pub eigenvalues: Vec<f64>,
}

impl NegativeCount {
    pub fn consistent(&self) -> bool {
        self.count == self.inertia_count
    }
}

/// Number of eigenvalues of `a - s M` below zero, i.e. of `(a, M)` below `s`.
fn count_below(a: &CsrMatrix, mass: &[f64], s: f64) -> Result<usize> {
    let scale = s.abs().max(1.0);
    // An exact eigenvalue at `s` makes the factorization break down; nudge.
    for nudge in [0.0, 1e-13, -1e-13, 1e-11, -1e-11] {
        let shift = s + nudge * scale;
        let shifted = a.add_diagonal(&mass.iter().map(|m| -shift * m).collect::<Vec<_>>());
        if let Some(f) = LdlFactor::new(&shifted, &shifted.rcm_ordering()) {
            return Ok(f.negative_pivots());
        }
    }
    Err(Error::InvalidParameter(format!("cannot factor the operator shifted by {s}")))
}

/// Number of negative eigenvalues of the Schroedinger form
/// `\int |grad u|^2 - \int V u^2`, counted with multiplicity.
pub fn negative_count(ops: &OperatorPair, v: &[f64]) -> Result<NegativeCount> {
    negative_count_with(ops, v, NEAR_ZERO, &EigenOptions::default())
}

/// As [`negative_count`] with an explicit zero band: eigenvalues within
/// `band` of zero are reported as boundary cases, not counted.
pub fn negative_count_with(
    ops: &OperatorPair,
    v: &[f64],
    band: f64,
    opts: &EigenOptions,
) -> Result<NegativeCount> {
    let n = ops.n();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("potential is not finite at vertex {i}")));
    }
    let band = band.max(NEAR_ZERO);
    let a = ops.schrodinger_stiffness(v);
    let inertia_count = count_below(&a, &ops.mass, -band)?;
    let below_band = count_below(&a, &ops.mass, band)?;
    let vmax = v.iter().cloned().fold(0.0, f64::max);
    let sigma = -vmax - natural_scale(&ops.mass);
    let want = (below_band + 1).min(n - 1);
    let spec = lowest_eigenpairs(&a, &ops.mass, want, sigma, opts)?;
    let count = spec.eigenvalues.iter().filter(|&&l| l < -band).count();
    let boundary = spec.eigenvalues.iter().filter(|&&l| l >= -band && l < band).count();
    let near_zero_flag = spec.eigenvalues.iter().any(|&l| l > -NEAR_ZERO && l < 0.0);
    Ok(NegativeCount {
        count,
        boundary,
        band,
        near_zero_flag,
        inertia_count,
        eigenvalues: spec.eigenvalues,
    })
}

/// Zero band for the stability operator on a mesh: Jacobi fields coming from
/// ambient isometries give exact zero eigenvalues in the smooth problem,
/// which the discretization moves by `O(h^2)`.
pub fn fem_zero_band(mesh: &TriangleMesh, v_max: f64) -> f64 {
    let h = mesh.max_edge_length();
    let lam = v_max.abs() + natural_scale(&mesh.vertex_areas());
    (0.25 * lam * lam * h * h).max(NEAR_ZERO)
}

/// Morse index of `J = -Delta - n - |S|^2` on a minimal hypersurface of
/// S^{n+1}, given the squared norm of its shape operator per vertex.
pub fn stability_index(mesh: &TriangleMesh, shape_sq: &[f64], n: usize) -> Result<NegativeCount> {
    if shape_sq.len() != mesh.n_vertices() {
        return Err(Error::DimensionMismatch { expected: mesh.n_vertices(), got: shape_sq.len() });
    }
    if let Some(i) = shape_sq.iter().position(|&s| !(s >= 0.0) || !s.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "|S|^2 must be finite and non-negative (vertex {i})"
        )));
    }
    let ops = assemble_laplacian(mesh)?;
    let v: Vec<f64> = shape_sq.iter().map(|s| n as f64 + s).collect();
    let vmax = v.iter().cloned().fold(0.0, f64::max);
    negative_count_with(&ops, &v, fem_zero_band(mesh, vmax), &EigenOptions::default())
}
