//! Closed meshes of standard surfaces with known geometry.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mesh::{Ambient, TriangleMesh};
use crate::error::{Error, Result};
use crate::vector::normalized;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fixture {
    /// Subdivided icosahedron on the unit sphere S^2 (tagged as lying in S^2).
    Icosphere { level: u32 },
    /// Flat torus R^2 / (aZ x bZ) with an n x n grid and intrinsic lengths.
    FlatTorus { a: f64, b: f64, n: usize },
    /// Clifford torus S^1(1/sqrt 2) x S^1(1/sqrt 2) in S^3, n x n grid.
    CliffordTorus { n: usize },
    /// Torus of revolution in R^3 with radii `major > minor`, n x n grid.
    RevolutionTorus { major: f64, minor: f64, n: usize },
    /// Real projective plane: the antipodal quotient of the icosphere,
    /// mapped into S^4 by the quadratic Veronese map.
    Veronese { level: u32 },
    /// Icosphere mapped two-to-one onto the Veronese surface in S^4.
    RoundRp2DoubleCover { level: u32 },
}

impl Fixture {
    pub fn build(&self) -> Result<TriangleMesh> {
        match *self {
            Fixture::Icosphere { level } => icosphere(level),
            Fixture::FlatTorus { a, b, n } => flat_torus(a, b, n),
            Fixture::CliffordTorus { n } => clifford_torus(n),
            Fixture::RevolutionTorus { major, minor, n } => revolution_torus(major, minor, n),
            Fixture::Veronese { level } => veronese(level),
            Fixture::RoundRp2DoubleCover { level } => round_rp2_double_cover(level),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Fixture::Icosphere { level } => write!(f, "icosphere:{level}"),
            Fixture::FlatTorus { a, b, n } => write!(f, "flat_torus:{a},{b},{n}"),
            Fixture::CliffordTorus { n } => write!(f, "clifford:{n}"),
            Fixture::RevolutionTorus { major, minor, n } => {
                write!(f, "revolution_torus:{major},{minor},{n}")
            }
            Fixture::Veronese { level } => write!(f, "veronese:{level}"),
            Fixture::RoundRp2DoubleCover { level } => write!(f, "rp2_double_cover:{level}"),
        }
    }
}

/// Parses `kind:params`, e.g. `icosphere:4`, `flat_torus:6.283,6.283,32`,
/// `clifford:64`, `revolution_torus:2,1,64`, `veronese:4`,
/// `rp2_double_cover:4`. `2pi` and `pi` are accepted as lengths.
impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("fixture `{s}`: {msg}"));
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if params.is_empty() {
            Vec::new()
        } else {
            params.split(',').map(str::trim).collect()
        };
        let real = |x: &str| -> Result<f64> {
            match x {
                "pi" => Ok(PI),
                "2pi" => Ok(2.0 * PI),
                "sqrt2" => Ok(2f64.sqrt()),
                _ => x.parse().map_err(|_| bad(&format!("`{x}` is not a number"))),
            }
        };
        let int = |x: &str| -> Result<usize> {
            x.parse().map_err(|_| bad(&format!("`{x}` is not a non-negative integer")))
        };
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("expected {n} parameter(s), got {}", args.len())))
            }
        };
        match kind {
            "icosphere" | "sphere" => {
                want(1)?;
                Ok(Fixture::Icosphere { level: int(args[0])? as u32 })
            }
            "flat_torus" | "flat" => {
                want(3)?;
                Ok(Fixture::FlatTorus { a: real(args[0])?, b: real(args[1])?, n: int(args[2])? })
            }
            "clifford" | "clifford_torus" => {
                want(1)?;
                Ok(Fixture::CliffordTorus { n: int(args[0])? })
            }
            "revolution_torus" | "torus" => {
                want(3)?;
                Ok(Fixture::RevolutionTorus {
                    major: real(args[0])?,
                    minor: real(args[1])?,
                    n: int(args[2])?,
                })
            }
            "veronese" | "rp2" => {
                want(1)?;
                Ok(Fixture::Veronese { level: int(args[0])? as u32 })
            }
            "rp2_double_cover" | "round_rp2_double_cover" => {
                want(1)?;
                Ok(Fixture::RoundRp2DoubleCover { level: int(args[0])? as u32 })
            }
            _ => Err(bad("unknown fixture kind")),
        }
    }
}

/// Unit vertices and faces of the subdivided icosahedron. The base
/// icosahedron has a vertex at the north pole and is centrally symmetric,
/// and midpoint subdivision keeps both properties.
fn icosphere_raw(level: u32) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let z = 1.0 / 5f64.sqrt();
    let r = 2.0 * z;
    let mut verts = vec![[0.0, 0.0, 1.0]];
    for k in 0..5 {
        let a = 2.0 * PI * k as f64 / 5.0;
        verts.push([r * a.cos(), r * a.sin(), z]);
    }
    for k in 0..5 {
        let a = 2.0 * PI * k as f64 / 5.0 + PI / 5.0;
        verts.push([r * a.cos(), r * a.sin(), -z]);
    }
    verts.push([0.0, 0.0, -1.0]);
    let mut faces = Vec::with_capacity(20);
    for k in 0..5 {
        let (u0, u1) = (1 + k, 1 + (k + 1) % 5);
        let (l0, l1) = (6 + k, 6 + (k + 1) % 5);
        faces.push([0, u0, u1]);
        faces.push([u0, l0, u1]);
        faces.push([u1, l0, l1]);
        faces.push([11, l1, l0]);
    }
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let p = normalized(&[
                    verts[a][0] + verts[b][0],
                    verts[a][1] + verts[b][1],
                    verts[a][2] + verts[b][2],
                ]);
                verts.push([p[0], p[1], p[2]]);
                verts.len() - 1
            })
        };
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    (verts, faces)
}

fn check_level(level: u32) -> Result<()> {
    if level == 0 || level > 8 {
        return Err(Error::InvalidParameter(format!(
            "subdivision level must be in 1..=8, got {level}"
        )));
    }
    Ok(())
}

fn check_grid(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("grid size must be at least 3, got {n}")));
    }
    Ok(())
}

/// Icosphere with `10 * 4^level + 2` vertices on the unit sphere S^2.
pub fn icosphere(level: u32) -> Result<TriangleMesh> {
    check_level(level)?;
    let (verts, faces) = icosphere_raw(level);
    let coords = verts.iter().flat_map(|p| p.iter().copied()).collect();
    TriangleMesh::new(coords, faces, Ambient::UnitSphere(2))
}

/// Periodic n x n grid triangulation; vertex `(i, j)` has index `i * n + j`.
fn grid_faces(n: usize) -> Vec<[usize; 3]> {
    let idx = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut faces = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    faces
}

/// Flat torus with side lengths `a`, `b`. Carries chart coordinates
/// `(x, y) in [0, a) x [0, b)` but no ambient embedding.
pub fn flat_torus(a: f64, b: f64, n: usize) -> Result<TriangleMesh> {
    check_grid(n)?;
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("torus sides must be positive, got {a}, {b}")));
    }
    let (ha, hb) = (a / n as f64, b / n as f64);
    let mut chart = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            chart.push(i as f64 * ha);
            chart.push(j as f64 * hb);
        }
    }
    // Signed grid offset in {-1, 0, 1} with wrap-around.
    let step = |p: usize, q: usize| -> f64 {
        let d = (q + n - p) % n;
        if d == n - 1 {
            -1.0
        } else {
            d as f64
        }
    };
    TriangleMesh::new_intrinsic(chart, grid_faces(n), |u, v| {
        let (ui, uj) = (u / n, u % n);
        let (vi, vj) = (v / n, v % n);
        let dx = step(ui, vi) * ha;
        let dy = step(uj, vj) * hb;
        dx.hypot(dy)
    })
}

/// Clifford torus `(cos u, sin u, cos v, sin v) / sqrt 2` in S^3.
pub fn clifford_torus(n: usize) -> Result<TriangleMesh> {
    check_grid(n)?;
    let s = 0.5f64.sqrt();
    let mut coords = Vec::with_capacity(4 * n * n);
    for i in 0..n {
        let u = 2.0 * PI * i as f64 / n as f64;
        for j in 0..n {
            let v = 2.0 * PI * j as f64 / n as f64;
            coords.extend_from_slice(&[s * u.cos(), s * u.sin(), s * v.cos(), s * v.sin()]);
        }
    }
    TriangleMesh::new(coords, grid_faces(n), Ambient::UnitSphere(3))
}

/// Torus of revolution about the z axis; vertex `(i, j)` sits at toroidal
/// angle `u = 2 pi i / n` and poloidal angle `v = 2 pi j / n`.
pub fn revolution_torus(major: f64, minor: f64, n: usize) -> Result<TriangleMesh> {
    check_grid(n)?;
    if !(minor > 0.0 && major > minor && major.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "revolution torus needs major > minor > 0, got {major}, {minor}"
        )));
    }
    let mut coords = Vec::with_capacity(3 * n * n);
    for i in 0..n {
        let u = 2.0 * PI * i as f64 / n as f64;
        for j in 0..n {
            let v = 2.0 * PI * j as f64 / n as f64;
            let rho = major + minor * v.cos();
            coords.extend_from_slice(&[rho * u.cos(), rho * u.sin(), minor * v.sin()]);
        }
    }
    TriangleMesh::new(coords, grid_faces(n), Ambient::Euclidean(3))
}

/// Quadratic Veronese map S^2 -> S^4; even, so it factors through RP^2.
pub fn veronese_point(p: &[f64]) -> Vec<f64> {
    let (x, y, z) = (p[0], p[1], p[2]);
    let s3 = 3f64.sqrt();
    let v = [
        s3 * x * y,
        s3 * x * z,
        s3 * y * z,
        s3 * (x * x - y * y) / 2.0,
        (x * x + y * y - 2.0 * z * z) / 2.0,
    ];
    normalized(&v)
}

/// Analytic mean curvature norm of the revolution torus at poloidal angle `v`.
pub fn revolution_torus_mean_curvature(major: f64, minor: f64, v: f64) -> f64 {
    0.5 * (1.0 / minor + v.cos() / (major + minor * v.cos())).abs()
}

/// RP^2 realized in S^4: the icosphere modulo the antipodal map, embedded by
/// the Veronese map. Area `6 pi`, first eigenvalue 2.
pub fn veronese(level: u32) -> Result<TriangleMesh> {
    check_level(level)?;
    let (verts, faces) = icosphere_raw(level);
    let key = |p: &[f64; 3]| p.map(|x| (x * 1e9).round() as i64);
    let index: HashMap<[i64; 3], usize> =
        verts.iter().enumerate().map(|(i, p)| (key(p), i)).collect();
    let antipode: Vec<usize> = verts
        .iter()
        .map(|p| {
            index
                .get(&key(&[-p[0], -p[1], -p[2]]))
                .copied()
                .ok_or_else(|| Error::Topology("icosphere lost central symmetry".into()))
        })
        .collect::<Result<_>>()?;
    // Representative of each antipodal class: the smaller index.
    let mut new_id = vec![usize::MAX; verts.len()];
    let mut reps = Vec::new();
    for i in 0..verts.len() {
        if i < antipode[i] {
            new_id[i] = reps.len();
            reps.push(i);
        }
    }
    for i in 0..verts.len() {
        if new_id[i] == usize::MAX {
            new_id[i] = new_id[antipode[i]];
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut quotient_faces = Vec::with_capacity(faces.len() / 2);
    for f in &faces {
        let g = f.map(|v| new_id[v]);
        let mut sorted = g;
        sorted.sort_unstable();
        if seen.insert(sorted) {
            quotient_faces.push(g);
        }
    }
    let coords = reps.iter().flat_map(|&i| veronese_point(&verts[i])).collect();
    TriangleMesh::new(coords, quotient_faces, Ambient::UnitSphere(4))
}

/// Icosphere composed with the Veronese map: an unbranched two-sheeted
/// cover of the Veronese surface. Area `12 pi`, first eigenvalue `2/3`.
pub fn round_rp2_double_cover(level: u32) -> Result<TriangleMesh> {
    check_level(level)?;
    let (verts, faces) = icosphere_raw(level);
    let coords = verts.iter().flat_map(|p| veronese_point(p)).collect();
    TriangleMesh::new(coords, faces, Ambient::UnitSphere(4))
}
