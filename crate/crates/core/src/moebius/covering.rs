use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::map::geodesic_distance;
use crate::error::{Error, Result};
use crate::vector::{dot, normalized};

#[derive(Debug, Clone, Serialize)]
pub struct CoveringTrial {
    pub radius: f64,
    pub samples: usize,
    /// Half-radius balls used by the greedy cover.
    pub balls: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub m: usize,
    /// The covering number `9^m`.
    pub bound: u64,
    pub max_balls: usize,
    /// Trials whose greedy cover needed more than `bound` balls.
    pub failures: usize,
    pub trials: Vec<CoveringTrial>,
}

pub fn random_sphere_point<R: Rng>(m: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..=m).map(|_| StandardNormal.sample(rng)).collect();
        if dot(&v, &v) > 1e-20 {
            return normalized(&v);
        }
    }
}

/// Uniform sample of the geodesic ball `B_r(a)` in S^m.
pub fn sample_ball<R: Rng>(a: &[f64], r: f64, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let m = a.len() - 1;
    let smax = if r >= std::f64::consts::FRAC_PI_2 { 1.0 } else { r.sin() };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        // Distance density is proportional to sin^(m-1).
        let d = rng.random::<f64>() * r;
        if m > 1 && rng.random::<f64>() > (d.sin() / smax).powi(m as i32 - 1) {
            continue;
        }
        let g: Vec<f64> = (0..=m).map(|_| StandardNormal.sample(rng)).collect();
        let ga = dot(&g, a);
        let tangent: Vec<f64> = g.iter().zip(a).map(|(x, y)| x - ga * y).collect();
        let tn = dot(&tangent, &tangent).sqrt();
        if tn < 1e-12 {
            continue;
        }
        let q: Vec<f64> = a
            .iter()
            .zip(&tangent)
            .map(|(x, t)| d.cos() * x + d.sin() * t / tn)
            .collect();
        out.push(normalized(&q));
    }
    out
}

/// Greedy cover of `points` by balls of radius `radius` centred at points;
/// returns the number of balls used.
pub fn greedy_cover(points: &[Vec<f64>], radius: f64) -> usize {
    let n = points.len();
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| geodesic_distance(&points[i], &points[j]) <= radius).collect())
        .collect();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut balls = 0;
    while left > 0 {
        let best = (0..n)
            .max_by_key(|&i| (nbrs[i].iter().filter(|&&j| !covered[j]).count(), std::cmp::Reverse(i)))
            .unwrap();
        for &j in &nbrs[best] {
            if !covered[j] {
                covered[j] = true;
                left -= 1;
            }
        }
        balls += 1;
    }
    balls
}

/// Cover of points of an arc of S^1 centred at `a` by arcs of half-width
/// `radius` centred at points, by a left-to-right sweep (optimal for
/// intervals up to the sample resolution).
pub fn arc_cover(a: &[f64], points: &[Vec<f64>], radius: f64) -> usize {
    // Signed angle from `a`, measured towards the rotated basis vector.
    let perp = [-a[1], a[0]];
    let mut angles: Vec<f64> =
        points.iter().map(|q| dot(q, &perp).atan2(dot(q, a))).collect();
    angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut balls = 0;
    let mut i = 0;
    while i < angles.len() {
        let left = angles[i];
        let mut c = i;
        while c + 1 < angles.len() && angles[c + 1] <= left + radius {
            c += 1;
        }
        let reach = angles[c] + radius;
        while i < angles.len() && angles[i] <= reach {
            i += 1;
        }
        balls += 1;
    }
    balls
}

fn cover(a: &[f64], points: &[Vec<f64>], radius: f64) -> usize {
    if a.len() == 2 {
        arc_cover(a, points, radius)
    } else {
        greedy_cover(points, radius)
    }
}

/// Empirical check of the covering property of S^m: random balls `B_r(a)`
/// are sampled densely and covered greedily by balls of radius `r/2`.
pub fn covering_witness(m: usize, trials: usize, samples: usize, seed: u64) -> Result<CoveringReport> {
    if !(1..=3).contains(&m) {
        return Err(Error::InvalidParameter(format!("sphere dimension must be 1, 2 or 3, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 9u64.pow(m as u32);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let a = random_sphere_point(m, &mut rng);
        let radius = rng.random::<f64>() * std::f64::consts::PI;
        let pts = sample_ball(&a, radius, samples, &mut rng);
        out.push(CoveringTrial { radius, samples, balls: cover(&a, &pts, radius / 2.0) });
    }
    Ok(CoveringReport {
        m,
        bound,
        max_balls: out.iter().map(|t| t.balls).max().unwrap_or(0),
        failures: out.iter().filter(|t| t.balls as u64 > bound).count(),
        trials: out,
    })
}

/// Greedy cover count for one explicit ball.
pub fn covering_count(a: &[f64], radius: f64, samples: usize, seed: u64) -> usize {
    if radius <= 0.0 {
        return 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_ball(a, radius, samples, &mut rng);
    cover(a, &pts, radius / 2.0)
}
