use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::geomcore::TriangleMesh;

/// Cotangent stiffness `K` and lumped (diagonal) mass `M` of a mesh.
///
/// `u^T K u` is the discrete Dirichlet energy and `u^T M u` the discrete
/// squared L2 norm of a piecewise-linear field `u`.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub stiffness: CsrMatrix,
    pub mass: Vec<f64>,
}

pub fn assemble_laplacian(mesh: &TriangleMesh) -> Result<OperatorPair> {
    for f in 0..mesh.n_faces() {
        if !(mesh.face_area(f) > 0.0) {
            return Err(Error::DegenerateFace { face: f });
        }
    }
    let n = mesh.n_vertices();
    let w = mesh.cotan_weights();
    let mut triplets = Vec::with_capacity(n + 2 * w.len());
    let mut diag = vec![0.0; n];
    for (e, &[a, b]) in mesh.edges().iter().enumerate() {
        triplets.push((a, b, -w[e]));
        triplets.push((b, a, -w[e]));
        diag[a] += w[e];
        diag[b] += w[e];
    }
    for (i, d) in diag.into_iter().enumerate() {
        triplets.push((i, i, d));
    }
    Ok(OperatorPair {
        stiffness: CsrMatrix::from_triplets(n, &triplets),
        mass: mesh.vertex_areas(),
    })
}

impl OperatorPair {
    pub fn n(&self) -> usize {
        self.mass.len()
    }

    /// Discrete Dirichlet energy `u^T K u`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        self.stiffness.bilinear(u, u)
    }

    /// Discrete `\int u^2`.
    pub fn mass_norm_sq(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.mass).map(|(x, m)| x * x * m).sum()
    }

    pub fn stiffness_form(&self, u: &[f64], w: &[f64]) -> f64 {
        self.stiffness.bilinear(u, w)
    }

    pub fn mass_form(&self, u: &[f64], w: &[f64]) -> f64 {
        u.iter().zip(w).zip(&self.mass).map(|((a, b), m)| a * b * m).sum()
    }

    /// Discrete `\int V u^2`.
    pub fn potential_form(&self, v: &[f64], u: &[f64]) -> f64 {
        u.iter().zip(v).zip(&self.mass).map(|((x, p), m)| p * x * x * m).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn rayleigh_quotient(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: u.len() });
        }
        let den = self.mass_norm_sq(u);
        if !(den > 0.0) {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.energy(u) / den)
    }

    /// `K - diag(M V)`: the stiffness of the Schroedinger form
    /// `\int |grad u|^2 - \int V u^2`.
    pub fn schrodinger_stiffness(&self, v: &[f64]) -> CsrMatrix {
        let d: Vec<f64> = v.iter().zip(&self.mass).map(|(p, m)| -p * m).collect();
        self.stiffness.add_diagonal(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomcore::fixtures::{flat_torus, icosphere};

    #[test]
    fn constants_are_in_the_kernel() {
        let m = icosphere(3).unwrap();
        let ops = assemble_laplacian(&m).unwrap();
        let ones = vec![1.0; ops.n()];
        let k1 = ops.stiffness.mul_vec(&ones);
        let scale = ops.stiffness.norm_inf();
        assert!(k1.iter().all(|x| x.abs() < 1e-10 * scale));
        assert!(ops.rayleigh_quotient(&ones).unwrap().abs() < 1e-12);
    }

    #[test]
    fn zero_field_has_no_quotient() {
        let m = flat_torus(1.0, 1.0, 4).unwrap();
        let ops = assemble_laplacian(&m).unwrap();
        assert!(matches!(ops.rayleigh_quotient(&vec![0.0; ops.n()]), Err(Error::ZeroDenominator)));
    }
}
