//! Lowest eigenpairs of `A v = lambda M v` with `A` symmetric sparse and `M`
//! a positive diagonal.
//!
//! Large problems use a block Krylov method on the shift-invert operator
//! `M^{1/2} (A - sigma M)^{-1} M^{1/2}` with full reorthogonalization,
//! explicit Rayleigh-Ritz and thick restarts. The eigenvalue count below a
//! separating shift is cross-checked with the inertia of `A - s M`, which
//! catches copies of a multiple eigenvalue that the Krylov space missed.

use nalgebra::{DMatrix, DMatrixView, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::assemble::OperatorPair;
use super::sparse::{CsrMatrix, LdlFactor};
use crate::error::{Error, Result};

/// Sorted eigenvalues with residual certificates.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `|A v - lambda M v| / |M v|` for each pair.
    pub residuals: Vec<f64>,
    /// M-orthonormal eigenvectors, in the same order.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Groups eigenvalues whose relative gap is below `rel_tol`.
    pub fn clusters(&self, rel_tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize, f64)> = Vec::new();
        for &l in &self.eigenvalues {
            match out.last_mut() {
                Some((sum, k, last)) if (l - *last).abs() <= rel_tol * l.abs().max(1.0) => {
                    *sum += l;
                    *k += 1;
                    *last = l;
                }
                _ => out.push((l, 1, l)),
            }
        }
        out.into_iter().map(|(s, k, _)| (s / k as f64, k)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct EigenOptions {
    pub seed: u64,
    /// Relative residual target `|A v - lambda M v| <= tol |M v|`.
    pub tol: f64,
    pub block: usize,
    pub max_restarts: usize,
    /// Problems with fewer unknowns are solved densely.
    pub dense_threshold: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { seed: 0x5eed, tol: 1e-8, block: 12, max_restarts: 300, dense_threshold: 800 }
    }
}

/// Lowest `count` eigenpairs of the Laplacian pair `(K, M)`.
pub fn eigen_spectrum(ops: &OperatorPair, count: usize) -> Result<Spectrum> {
    eigen_spectrum_with(ops, count, &EigenOptions::default())
}

pub fn eigen_spectrum_with(ops: &OperatorPair, count: usize, opts: &EigenOptions) -> Result<Spectrum> {
    let sigma = -natural_scale(&ops.mass);
    lowest_eigenpairs(&ops.stiffness, &ops.mass, count, sigma, opts)
}

/// `2 pi / area`: the order of the first nonzero eigenvalue of a surface.
pub(crate) fn natural_scale(mass: &[f64]) -> f64 {
    2.0 * std::f64::consts::PI / mass.iter().sum::<f64>()
}

fn residual(a: &CsrMatrix, mass: &[f64], v: &[f64], lambda: f64) -> f64 {
    let av = a.mul_vec(v);
    let mut r2 = 0.0;
    let mut m2 = 0.0;
    for i in 0..v.len() {
        let mv = mass[i] * v[i];
        r2 += (av[i] - lambda * mv).powi(2);
        m2 += mv * mv;
    }
    (r2 / m2).sqrt()
}

/// Lowest `count` eigenpairs of `(a, mass)`; `sigma` must lie strictly below
/// the spectrum so that `a - sigma M` is positive definite.
pub(crate) fn lowest_eigenpairs(
    a: &CsrMatrix,
    mass: &[f64],
    count: usize,
    sigma: f64,
    opts: &EigenOptions,
) -> Result<Spectrum> {
    let n = mass.len();
    if count == 0 || count >= n {
        return Err(Error::InvalidParameter(format!(
            "eigenpair count must be in 1..{n}, got {count}"
        )));
    }
    if n < opts.dense_threshold {
        return dense_eigenpairs(a, mass, count);
    }
    let shifted = a.add_diagonal(&mass.iter().map(|m| -sigma * m).collect::<Vec<_>>());
    let perm = shifted.rcm_ordering();
    let fac = LdlFactor::new(&shifted, &perm)
        .ok_or_else(|| Error::InvalidParameter("shifted operator is singular".into()))?;
    let sq: Vec<f64> = mass.iter().map(|m| m.sqrt()).collect();
    let op = |y: &[f64]| -> Vec<f64> {
        let b: Vec<f64> = y.iter().zip(&sq).map(|(a, s)| a * s).collect();
        let mut x = fac.solve(&b);
        x.iter_mut().zip(&sq).for_each(|(a, s)| *a *= s);
        x
    };

    let block = opts.block.clamp(1, n);
    let keep = (count + block).min(n);
    let ncv = (5 * count / 2 + 2 * block).max(count + 4 * block).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut random_block = |k: usize| -> Vec<DVector<f64>> {
        (0..k).map(|_| DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng))).collect()
    };

    // Columns `0..k` of `basis` are orthonormal; `images` holds the operator
    // applied to them and `proj` the projected matrix `basis^T images`.
    let mut basis = DMatrix::<f64>::zeros(n, ncv);
    let mut images = DMatrix::<f64>::zeros(n, ncv);
    let mut proj = DMatrix::<f64>::zeros(ncv, ncv);
    let mut k = 0;
    let mut candidates = random_block(block);
    let mut partial = Spectrum::default();
    let mut worst = f64::INFINITY;

    for restart in 0..opts.max_restarts {
        // Expand the basis with Krylov blocks.
        let first_new = k;
        while k < ncv {
            let mut frontier = Vec::new();
            for mut c in candidates.drain(..) {
                if k >= ncv {
                    break;
                }
                if orthonormalize_against(&basis.columns(0, k), &mut c) {
                    let ac = op(c.as_slice());
                    basis.set_column(k, &c);
                    images.set_column(k, &DVector::from_vec(ac));
                    frontier.push(k);
                    k += 1;
                }
            }
            candidates = if frontier.is_empty() {
                random_block(block)
            } else {
                frontier.iter().map(|&i| images.column(i).into_owned()).collect()
            };
        }

        // Rayleigh-Ritz; rows of kept Ritz vectors are already diagonal.
        if first_new < k {
            let fresh = k - first_new;
            let left = basis.columns(0, k).transpose() * images.columns(first_new, fresh);
            let right = images.columns(0, k).transpose() * basis.columns(first_new, fresh);
            for j in 0..fresh {
                for i in 0..k {
                    let v = 0.5 * (left[(i, j)] + right[(i, j)]);
                    proj[(i, first_new + j)] = v;
                    proj[(first_new + j, i)] = v;
                }
            }
        }
        let eig = SymmetricEigen::new(proj.view((0, 0), (k, k)).into_owned());
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[y].partial_cmp(&eig.eigenvalues[x]).unwrap());
        let kk = keep.min(k);
        let y = DMatrix::from_fn(k, kk, |i, j| eig.eigenvectors[(i, order[j])]);
        let thetas: Vec<f64> = order.iter().take(kk).map(|&c| eig.eigenvalues[c]).collect();
        let ritz = basis.columns(0, k) * &y;
        let ritz_images = images.columns(0, k) * &y;

        let mut values = Vec::with_capacity(kk);
        let mut vectors = Vec::with_capacity(kk);
        let mut residuals = Vec::with_capacity(kk);
        for (i, &theta) in thetas.iter().enumerate().take(kk) {
            let lambda = if theta > 0.0 { sigma + 1.0 / theta } else { f64::INFINITY };
            let v: Vec<f64> = ritz.column(i).iter().zip(&sq).map(|(x, s)| x / s).collect();
            let r = if i < count && lambda.is_finite() {
                residual(a, mass, &v, lambda)
            } else {
                f64::INFINITY
            };
            values.push(lambda);
            vectors.push(v);
            residuals.push(r);
        }
        worst = residuals[..count].iter().cloned().fold(0.0, f64::max);
        partial = Spectrum {
            eigenvalues: values[..count].to_vec(),
            residuals: residuals[..count].to_vec(),
            eigenvectors: vectors[..count].to_vec(),
        };

        let mut missed = false;
        if worst <= opts.tol {
            match inertia_check(a, mass, &values, count) {
                Some(true) | None => return Ok(partial),
                Some(false) => missed = true,
            }
        }

        // Thick restart: keep the leading Ritz vectors, continue from residuals.
        let mut next: Vec<DVector<f64>> = (0..kk)
            .filter(|&i| i >= count || residuals[i] > opts.tol)
            .take(block)
            .map(|i| ritz_images.column(i) - ritz.column(i) * thetas[i])
            .collect();
        if missed || restart % 25 == 24 {
            next.extend(random_block(block));
        }
        basis.columns_mut(0, kk).copy_from(&ritz);
        images.columns_mut(0, kk).copy_from(&ritz_images);
        proj.fill(0.0);
        for (i, &t) in thetas.iter().enumerate() {
            proj[(i, i)] = t;
        }
        k = kk;
        candidates = next;
    }
    Err(Error::NoConvergence {
        iterations: opts.max_restarts,
        worst_residual: worst,
        partial: Box::new(partial),
    })
}

/// Checks that the number of eigenvalues below a separating shift matches
/// the number of Ritz values found below it. `None` when no clean gap exists.
fn inertia_check(a: &CsrMatrix, mass: &[f64], values: &[f64], count: usize) -> Option<bool> {
    if values.len() <= count {
        return None;
    }
    // Walk down from `count` to the first clear gap.
    let mut j = count;
    while j > 0 {
        let (lo, hi) = (values[j - 1], values[j]);
        if hi - lo > 1e-6 * lo.abs().max(1e-3) {
            break;
        }
        j -= 1;
    }
    if j == 0 {
        return None;
    }
    let s = 0.5 * (values[j - 1] + values[j]);
    let shifted = a.add_diagonal(&mass.iter().map(|m| -s * m).collect::<Vec<_>>());
    let fac = LdlFactor::new(&shifted, &shifted.rcm_ordering())?;
    Some(fac.negative_pivots() == j)
}

fn dense_eigenpairs(a: &CsrMatrix, mass: &[f64], count: usize) -> Result<Spectrum> {
    let n = mass.len();
    let isq: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut c = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for (j, v) in a.row(i) {
            c[(i, j)] = v * isq[i] * isq[j];
        }
    }
    // Symmetrize against assembly round-off.
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].partial_cmp(&eig.eigenvalues[y]).unwrap());
    let mut spec = Spectrum::default();
    for &i in order.iter().take(count) {
        let lambda = eig.eigenvalues[i];
        let v: Vec<f64> = eig.eigenvectors.column(i).iter().zip(&isq).map(|(x, s)| x * s).collect();
        spec.residuals.push(residual(a, mass, &v, lambda));
        spec.eigenvalues.push(lambda);
        spec.eigenvectors.push(v);
    }
    Ok(spec)
}

/// Two passes of classical Gram-Schmidt, then normalization. Returns false
/// when the vector is (numerically) inside the span of `basis`.
fn orthonormalize_against(basis: &DMatrixView<f64>, v: &mut DVector<f64>) -> bool {
    let original = v.norm();
    if !(original > 0.0) || !original.is_finite() {
        return false;
    }
    if basis.ncols() > 0 {
        for _ in 0..2 {
            let coeffs = basis.tr_mul(v);
            v.gemv(-1.0, basis, &coeffs, 1.0);
        }
    }
    let nrm = v.norm();
    if nrm < 1e-10 * original {
        return false;
    }
    *v /= nrm;
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomcore::fixtures::{clifford_torus, icosphere};
    use crate::spectral::assemble_laplacian;

    #[test]
    fn sparse_and_dense_paths_agree() {
        let m = icosphere(2).unwrap();
        let ops = assemble_laplacian(&m).unwrap();
        let dense = eigen_spectrum(&ops, 12).unwrap();
        let opts = EigenOptions { dense_threshold: 0, ..Default::default() };
        let sparse = eigen_spectrum_with(&ops, 12, &opts).unwrap();
        for (a, b) in dense.eigenvalues.iter().zip(&sparse.eigenvalues) {
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "{a} vs {b}");
        }
        assert!(sparse.max_residual() <= 1e-8);
    }

    #[test]
    fn multiplicity_eight_cluster_is_complete() {
        // Clifford torus grid eigenvalues have exact multiplicity 8 for j != k.
        let m = clifford_torus(24).unwrap();
        let ops = assemble_laplacian(&m).unwrap();
        let opts = EigenOptions { dense_threshold: 0, block: 4, ..Default::default() };
        let s = eigen_spectrum_with(&ops, 22, &opts).unwrap();
        let dense = eigen_spectrum(&ops, 22).unwrap();
        for (a, b) in dense.eigenvalues.iter().zip(&s.eigenvalues) {
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "{a} vs {b}");
        }
    }
}
