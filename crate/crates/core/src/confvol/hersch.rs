use serde::Serialize;

use super::optimize::dilation_from;
use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::packing::DiscreteMeasure;
use crate::vector::norm;

#[derive(Debug, Clone, Serialize)]
pub struct HerschCenter {
    pub map: MoebiusMap,
    /// `|integral of x d(s_* mu)| / mu(S^m)` at the returned map.
    pub residual: f64,
    pub iterations: usize,
}

/// Normalized first moment `integral of x d(s_* mu) / mu(S^m)`.
pub fn center_of_mass(mu: &DiscreteMeasure, s: &MoebiusMap) -> Vec<f64> {
    let mut c = vec![0.0; mu.dim];
    for i in 0..mu.len() {
        let y = s.apply(mu.point(i));
        c.iter_mut().zip(&y).for_each(|(a, b)| *a += mu.weights[i] * b);
    }
    c.iter_mut().for_each(|a| *a /= mu.total);
    c
}

const MAX_ITER: usize = 2000;

/// Dilation `s` with `|center_of_mass(mu, s)| <= tol`. Damped fixed point:
/// the dilation parameter moves against the current centre of mass, with
/// the step halved whenever the residual fails to drop.
pub fn hersch_center(mu: &DiscreteMeasure, tol: f64) -> Result<HerschCenter> {
    let atom = mu.atom_fraction();
    if atom >= 0.5 {
        return Err(Error::AtomicMeasure { fraction: atom, limit: 0.5 });
    }
    let mut w = vec![0.0; mu.dim];
    let mut s = dilation_from(&w)?;
    let mut c = center_of_mass(mu, &s);
    let mut r = norm(&c);
    let mut alpha = 1.0;
    let mut iterations = 0;
    while r > tol {
        if iterations == MAX_ITER || alpha < 1e-14 {
            return Err(Error::CenteringFailed { residual: r, iterations });
        }
        iterations += 1;
        let trial: Vec<f64> = w.iter().zip(&c).map(|(a, b)| a - alpha * b).collect();
        let st = dilation_from(&trial)?;
        let ct = center_of_mass(mu, &st);
        let rt = norm(&ct);
        if rt < r {
            (w, s, c, r) = (trial, st, ct, rt);
            alpha = (alpha * 1.5).min(8.0);
        } else {
            alpha *= 0.5;
        }
    }
    Ok(HerschCenter { map: s, residual: r, iterations })
}
