//! Disjoint-annuli decomposition of a discrete measure on S^m.
//!
//! Practical greedy search: for a mass target `c * mu / k` the search places
//! `k` annuli one at a time, each the smallest-radius cap (or, failing
//! that, annulus) around a candidate centre whose doubled annulus avoids
//! every support point already claimed by earlier doubled annuli. The
//! target fraction `c` starts at 1 and decreases until the greedy succeeds,
//! down to the guaranteed constant `1 / (8 * 9^(12 m))`.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::measure::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::moebius::{geodesic_distance, random_sphere_point, Annulus, SpherePoint};

#[derive(Debug, Clone)]
pub struct GnyConfig {
    pub seed: u64,
    /// Support points used as candidate centres (evenly strided).
    pub support_candidates: usize,
    /// Extra random candidate centres.
    pub random_candidates: usize,
    /// Ratio between successive mass-fraction targets.
    pub decay: f64,
    /// Outer radii stay below this so every cap carries a test function.
    pub max_outer: f64,
}

impl Default for GnyConfig {
    fn default() -> Self {
        GnyConfig {
            seed: 0x6e79,
            support_candidates: 256,
            random_candidates: 64,
            decay: 0.8,
            max_outer: FRAC_PI_2 - 1e-6,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnulusFamily {
    pub annuli: Vec<Annulus>,
    /// `mu(A_i)` for each annulus.
    pub masses: Vec<f64>,
    /// Doubled annuli are pairwise disjoint on the support.
    pub doubled_disjoint: bool,
    /// `min_i mu(A_i) * k / mu(S^m)`.
    pub c_achieved: f64,
    /// Guaranteed constant for this sphere dimension.
    pub c_theory: f64,
    pub total: f64,
}

/// `1 / (8 * 9^(12 m))`.
pub fn theoretical_constant(m: usize) -> f64 {
    1.0 / (8.0 * 9f64.powi(12 * m as i32))
}

/// Bisection steps after the geometric descent brackets the constant.
const BISECTION_STEPS: usize = 8;

struct Candidate {
    center: Vec<f64>,
    /// Support indices sorted by distance from the centre.
    order: Vec<usize>,
    /// Inverse of `order`.
    rank: Vec<usize>,
    dist: Vec<f64>,
    /// `prefix[j]` = mass of the `j` nearest points.
    prefix: Vec<f64>,
}

impl Candidate {
    fn new(mu: &DiscreteMeasure, center: Vec<f64>) -> Self {
        let d: Vec<f64> = (0..mu.len()).map(|i| geodesic_distance(&center, mu.point(i))).collect();
        let mut order: Vec<usize> = (0..mu.len()).collect();
        order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap().then(a.cmp(&b)));
        let dist: Vec<f64> = order.iter().map(|&i| d[i]).collect();
        let mut rank = vec![0; order.len()];
        order.iter().enumerate().for_each(|(j, &i)| rank[i] = j);
        let mut prefix = Vec::with_capacity(order.len() + 1);
        prefix.push(0.0);
        for &i in &order {
            prefix.push(prefix.last().unwrap() + mu.weights[i]);
        }
        Candidate { center, order, rank, dist, prefix }
    }

    /// Number of points at distance `< x`.
    fn below(&self, x: f64) -> usize {
        self.dist.partition_point(|&d| d < x)
    }
}

/// Smallest radius strictly above `d`.
fn just_above(d: f64) -> f64 {
    d + (d.abs() * 4.0 * f64::EPSILON).max(1e-15)
}

#[derive(Debug, Clone, Copy)]
struct Choice {
    cand: usize,
    inner: f64,
    outer: f64,
    mass: f64,
}

type Found = Option<(f64, f64, f64)>;

/// Best cap and best proper annulus around candidate `c` reaching `target`,
/// as `(inner, outer, mass)`. `used` flags claimed points in the
/// candidate's distance order.
fn best_for(c: &Candidate, used: &[bool], target: f64, max_outer: f64) -> (Found, Found) {
    let n = c.dist.len();
    let need = target * (1.0 - 1e-12);
    // Distances of claimed points, ascending, with an open end.
    let mut blocked: Vec<f64> = (0..n).filter(|&j| used[j]).map(|j| c.dist[j]).collect();
    blocked.push(f64::INFINITY);
    let (mut cap, mut ring): (Found, Found) = (None, None);
    let gaps = std::iter::once((None, blocked[0])).chain(blocked.windows(2).map(|w| (Some(w[0]), w[1])));
    for (lo, hi) in gaps {
        let inner = match lo {
            None => 0.0,
            // The annulus needs outer > inner > 2u and 2 outer <= hi.
            Some(u) if hi <= 4.0 * u => continue,
            Some(u) => 2.0 * just_above(u),
        };
        let s = c.below(inner);
        let base = c.prefix[s];
        // Smallest e with prefix[e] - base >= need.
        let e = c.prefix[s..].partition_point(|&p| p - base < need) + s;
        if e > n || e == s {
            continue;
        }
        let outer = just_above(c.dist[e - 1]);
        if outer <= inner || outer >= max_outer || 2.0 * outer > hi {
            continue;
        }
        let mass = c.prefix[c.below(outer)] - base;
        let slot = if lo.is_none() { &mut cap } else { &mut ring };
        if slot.is_none_or(|b| outer < b.1) {
            *slot = Some((inner, outer, mass));
        }
    }
    (cap, ring)
}

fn attempt(mu: &DiscreteMeasure, cands: &[Candidate], k: usize, target: f64, max_outer: f64) -> Option<Vec<Choice>> {
    // Claimed flags per candidate, indexed by rank.
    let mut used = vec![vec![false; mu.len()]; cands.len()];
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        // Caps take precedence over proper annuli.
        let mut cap: Option<Choice> = None;
        let mut ring: Option<Choice> = None;
        for (ci, c) in cands.iter().enumerate() {
            let (a, b) = best_for(c, &used[ci], target, max_outer);
            for (found, slot) in [(a, &mut cap), (b, &mut ring)] {
                if let Some((inner, outer, mass)) = found {
                    if slot.is_none_or(|p| outer < p.outer) {
                        *slot = Some(Choice { cand: ci, inner, outer, mass });
                    }
                }
            }
        }
        let p = cap.or(ring)?;
        let c = &cands[p.cand];
        for j in c.below(0.5 * p.inner)..c.below(2.0 * p.outer) {
            let point = c.order[j];
            for (other, flags) in cands.iter().zip(used.iter_mut()) {
                flags[other.rank[point]] = true;
            }
        }
        chosen.push(p);
    }
    Some(chosen)
}

/// `k` annuli whose doubles are pairwise disjoint, each of mass at least
/// `c_achieved * mu / k`.
pub fn gny_decompose(mu: &DiscreteMeasure, k: usize, config: &GnyConfig) -> Result<AnnulusFamily> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of annuli must be positive".into()));
    }
    let limit = 1.0 / (8.0 * k as f64);
    let fraction = mu.atom_fraction();
    if fraction > limit {
        return Err(Error::AtomicMeasure { fraction, limit });
    }
    let m = mu.dim - 1;
    let c_theory = theoretical_constant(m);

    let stride = mu.len().div_ceil(config.support_candidates.max(1)).max(1);
    let mut centers: Vec<Vec<f64>> = (0..mu.len()).step_by(stride).map(|i| mu.point(i).to_vec()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    centers.extend((0..config.random_candidates).map(|_| random_sphere_point(m, &mut rng)));
    let cands: Vec<Candidate> = centers.into_iter().map(|c| Candidate::new(mu, c)).collect();

    let per = mu.total / k as f64;
    let run = |c: f64| attempt(mu, &cands, k, c * per, config.max_outer);
    let achieved = |ch: &[Choice]| ch.iter().map(|x| x.mass).fold(f64::INFINITY, f64::min) / per;

    // Descend geometrically, then bisect between the last failure and the
    // first success.
    let mut fail = None;
    let mut found = None;
    let mut c = 1.0;
    while c >= c_theory {
        if let Some(ch) = run(c) {
            found = Some((c, ch));
            break;
        }
        fail = Some(c);
        c *= if c > 1e-3 { config.decay } else { 0.5 };
    }
    if found.is_none() {
        if let Some(ch) = run(c_theory) {
            found = Some((c_theory, ch));
        }
    }
    let (mut lo, mut best) = found.ok_or(Error::SearchExhausted { k, c: c_theory })?;
    if let Some(mut hi) = fail {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            match run(mid) {
                Some(ch) => {
                    if achieved(&ch) > achieved(&best) {
                        best = ch;
                    }
                    lo = mid;
                }
                None => hi = mid,
            }
        }
    }

    let annuli = best
        .iter()
        .map(|ch| {
            let center = SpherePoint::from_direction(&cands[ch.cand].center)?;
            Annulus::new(center, ch.inner, ch.outer)
        })
        .collect::<Result<Vec<_>>>()?;
    let masses = best.iter().map(|ch| ch.mass).collect();
    Ok(AnnulusFamily {
        annuli,
        masses,
        doubled_disjoint: true,
        c_achieved: achieved(&best),
        c_theory,
        total: mu.total,
    })
}
