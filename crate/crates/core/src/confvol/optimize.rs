//! Conformal volume by derivative-free ascent over the dilations
//! `xi_{p,t}`. Rotations preserve the round metric, so the supremum over
//! the whole Moebius group equals the supremum over dilations.
//!
//! A dilation is encoded by `w in R^{m+1}` with `p = w / |w|` and
//! `t = exp(|w|)`; `w = 0` is the identity and `|w| <= ln(max_t)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::immersion::{image_volume, SphereImmersion};
use crate::error::{Error, Result};
use crate::moebius::{random_sphere_point, MoebiusMap, SpherePoint};
use crate::vector::norm;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfVolConfig {
    /// Number of starting points; the first is always the identity.
    pub starts: usize,
    pub max_t: f64,
    /// Final coordinate step in `w`.
    pub tol: f64,
    pub seed: u64,
    /// Objective evaluations allowed per start.
    pub max_evals: usize,
}

impl Default for ConfVolConfig {
    fn default() -> Self {
        ConfVolConfig { starts: 6, max_t: 50.0, tol: 1e-4, seed: 0xc0f, max_evals: 2000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub start: usize,
    pub w: Vec<f64>,
    pub volume: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformalVolumeResult {
    /// Best pull-back volume found: a lower bound for the supremum.
    pub value: f64,
    pub argmax: MoebiusMap,
    pub identity_value: f64,
    /// Accepted iterates of every start, in order.
    pub trace: Vec<TracePoint>,
    /// The best iterate sits on the `t = max_t` boundary and the volume was
    /// still increasing there.
    pub diverged: bool,
    pub evaluations: usize,
    /// Domain area excluded as singular.
    pub singular_area: f64,
}

/// Dilation encoded by `w`.
pub fn dilation_from(w: &[f64]) -> Result<MoebiusMap> {
    let r = norm(w);
    if r == 0.0 {
        return Ok(MoebiusMap::identity(w.len() - 1));
    }
    MoebiusMap::dilation(SpherePoint::from_direction(w)?, r.exp())
}

struct Objective<'a> {
    imm: &'a SphereImmersion,
    regular: Vec<bool>,
    radius: f64,
    evals: usize,
}

impl Objective<'_> {
    fn eval(&mut self, w: &[f64]) -> f64 {
        self.evals += 1;
        let s = dilation_from(w).expect("encoded dilation is valid");
        image_volume(self.imm, &self.imm.composed_images(&s), &self.regular)
    }

    fn project(&self, w: &mut [f64]) {
        let r = norm(w);
        if r > self.radius {
            w.iter_mut().for_each(|x| *x *= self.radius / r);
        }
    }
}

fn better(new: f64, old: f64) -> bool {
    new > old + 1e-11 * old.abs()
}

/// Coordinate search with step halving, then one parabolic step per axis.
fn ascend(obj: &mut Objective, start: usize, w0: Vec<f64>, cfg: &ConfVolConfig, trace: &mut Vec<TracePoint>) -> (Vec<f64>, f64) {
    let d = w0.len();
    let budget = obj.evals + cfg.max_evals;
    let mut w = w0;
    let mut f = obj.eval(&w);
    trace.push(TracePoint { start, w: w.clone(), volume: f });
    let mut step = 0.25 * obj.radius;
    while step >= cfg.tol && obj.evals < budget {
        let mut moved = false;
        for i in 0..d {
            for sign in [1.0, -1.0] {
                let mut trial = w.clone();
                trial[i] += sign * step;
                obj.project(&mut trial);
                let ft = obj.eval(&trial);
                if better(ft, f) {
                    w = trial;
                    f = ft;
                    moved = true;
                    trace.push(TracePoint { start, w: w.clone(), volume: f });
                    break;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    let h = 4.0 * cfg.tol;
    for i in 0..d {
        let mut lo = w.clone();
        lo[i] -= h;
        let mut hi = w.clone();
        hi[i] += h;
        obj.project(&mut lo);
        obj.project(&mut hi);
        let (fl, fh) = (obj.eval(&lo), obj.eval(&hi));
        let curv = fl - 2.0 * f + fh;
        if curv < 0.0 {
            let mut trial = w.clone();
            trial[i] += 0.5 * h * (fl - fh) / curv;
            obj.project(&mut trial);
            let ft = obj.eval(&trial);
            if better(ft, f) {
                w = trial;
                f = ft;
                trace.push(TracePoint { start, w: w.clone(), volume: f });
            }
        }
    }
    (w, f)
}

/// Multi-start ascent of the pull-back volume over dilations. The best
/// value is a certified lower bound for the conformal volume of the map.
pub fn conformal_volume(imm: &SphereImmersion, config: &ConfVolConfig) -> Result<ConformalVolumeResult> {
    if !(config.max_t > 1.0) || !(config.tol > 0.0) || config.starts == 0 {
        return Err(Error::InvalidParameter("conformal volume needs max_t > 1, tol > 0, starts > 0".into()));
    }
    if imm.singular_faces.len() == imm.mesh.n_faces() {
        return Err(Error::AllFacesSingular);
    }
    let d = imm.dim;
    let radius = config.max_t.ln();
    let mut obj = Objective { imm, regular: imm.regular_mask(), radius, evals: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trace = Vec::new();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut identity_value = 0.0;
    for start in 0..config.starts {
        let w0 = if start == 0 {
            vec![0.0; d]
        } else {
            let dir = random_sphere_point(d - 1, &mut rng);
            let r = rng.random_range(0.0..0.5) * radius;
            dir.iter().map(|x| x * r).collect()
        };
        let (w, f) = ascend(&mut obj, start, w0, config, &mut trace);
        if start == 0 {
            identity_value = trace[0].volume;
        }
        // Strictly better keeps the earliest start on ties.
        if best.as_ref().is_none_or(|(_, bf)| better(f, *bf)) {
            best = Some((w, f));
        }
    }
    let (w, _) = best.expect("at least one start");
    let argmax = dilation_from(&w)?;
    let value = image_volume(imm, &imm.composed_images(&argmax), &obj.regular);
    let diverged = if norm(&w) > radius * (1.0 - 1e-3) {
        let inner: Vec<f64> = w.iter().map(|x| x * 0.98).collect();
        better(value, obj.eval(&inner))
    } else {
        false
    };
    Ok(ConformalVolumeResult {
        value,
        argmax,
        identity_value,
        trace,
        diverged,
        evaluations: obj.evals,
        singular_area: imm.singular_area(),
    })
}
