use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{dist, heron, norm};

/// Where the vertex coordinates of a mesh live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// Coordinates in R^d.
    Euclidean(usize),
    /// Coordinates on the unit sphere S^m in R^(m+1).
    UnitSphere(usize),
    /// Two-dimensional chart coordinates only; the metric comes from
    /// intrinsic edge lengths.
    Abstract,
}

impl Ambient {
    /// Length of a coordinate vector under this tag.
    pub fn coord_dim(&self) -> usize {
        match *self {
            Ambient::Euclidean(d) => d,
            Ambient::UnitSphere(m) => m + 1,
            Ambient::Abstract => 2,
        }
    }

    pub fn has_coordinates(&self) -> bool {
        !matches!(self, Ambient::Abstract)
    }
}

/// Closed, connected triangulated surface.
///
/// The mesh is immutable after construction; every constructor validates the
/// combinatorial and metric invariants (closed two-manifold, connected, strict
/// triangle inequality on every face, unit-norm vertices for sphere meshes).
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    ambient: Ambient,
    coords: Vec<f64>,
    faces: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    /// `face_edges[f][j]` is the edge opposite to corner `j` of face `f`.
    face_edges: Vec<[usize; 3]>,
    edge_lengths: Vec<f64>,
    intrinsic: bool,
    orientable: bool,
}

impl TriangleMesh {
    /// Mesh whose metric is induced by the ambient coordinates.
    pub fn new(coords: Vec<f64>, faces: Vec<[usize; 3]>, ambient: Ambient) -> Result<Self> {
        if !ambient.has_coordinates() {
            return Err(Error::InvalidParameter(
                "abstract meshes need intrinsic edge lengths".into(),
            ));
        }
        let dim = ambient.coord_dim();
        let (edges, face_edges) = build_edges(&coords, dim, &faces)?;
        let edge_lengths = edges
            .iter()
            .map(|&[a, b]| dist(&coords[a * dim..(a + 1) * dim], &coords[b * dim..(b + 1) * dim]))
            .collect();
        Self::finish(ambient, coords, faces, edges, face_edges, edge_lengths, false)
    }

    /// Mesh with an abstract metric: `chart` holds two chart coordinates per
    /// vertex (used only for sampling fields) and `length` gives the length of
    /// the edge between two vertices.
    pub fn new_intrinsic(
        chart: Vec<f64>,
        faces: Vec<[usize; 3]>,
        length: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let (edges, face_edges) = build_edges(&chart, 2, &faces)?;
        let edge_lengths = edges.iter().map(|&[a, b]| length(a, b)).collect();
        Self::finish(Ambient::Abstract, chart, faces, edges, face_edges, edge_lengths, true)
    }

    fn finish(
        ambient: Ambient,
        coords: Vec<f64>,
        faces: Vec<[usize; 3]>,
        edges: Vec<[usize; 2]>,
        face_edges: Vec<[usize; 3]>,
        edge_lengths: Vec<f64>,
        intrinsic: bool,
    ) -> Result<Self> {
        let dim = ambient.coord_dim();
        if let Ambient::UnitSphere(_) = ambient {
            for (i, p) in coords.chunks(dim).enumerate() {
                let r = norm(p);
                if (r - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {i} has norm {r}, expected a unit vector"
                    )));
                }
            }
        }
        for (e, &l) in edge_lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge {e} has non-positive length {l}"
                )));
            }
        }
        for (f, fe) in face_edges.iter().enumerate() {
            let [a, b, c] = fe.map(|e| edge_lengths[e]);
            if !(a < b + c && b < a + c && c < a + b) {
                return Err(Error::DegenerateFace { face: f });
            }
        }
        let orientable = check_orientable(&faces, &edges, &face_edges);
        Ok(TriangleMesh {
            ambient,
            coords,
            faces,
            edges,
            face_edges,
            edge_lengths,
            intrinsic,
            orientable,
        })
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    /// Length of one coordinate vector.
    pub fn dim(&self) -> usize {
        self.ambient.coord_dim()
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len() / self.dim()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn face_edges(&self) -> &[[usize; 3]] {
        &self.face_edges
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }

    /// Flat coordinate array, `dim()` entries per vertex.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn has_intrinsic_metric(&self) -> bool {
        self.intrinsic
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    /// Genus of the surface; for a non-orientable surface this is the genus
    /// of its orienting double cover.
    pub fn genus(&self) -> usize {
        let chi = self.euler_characteristic();
        if self.orientable {
            ((2 - chi) / 2).max(0) as usize
        } else {
            (1 - chi).max(0) as usize
        }
    }

    /// Side lengths of face `f`, `[l0, l1, l2]` with `lj` opposite corner `j`.
    pub fn face_lengths(&self, f: usize) -> [f64; 3] {
        self.face_edges[f].map(|e| self.edge_lengths[e])
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.face_lengths(f);
        heron(a, b, c)
    }

    /// Cotangents of the three corner angles of face `f`.
    pub fn face_cotangents(&self, f: usize) -> [f64; 3] {
        let l = self.face_lengths(f);
        let area = heron(l[0], l[1], l[2]);
        let sq = l.map(|x| x * x);
        [
            (sq[1] + sq[2] - sq[0]) / (4.0 * area),
            (sq[0] + sq[2] - sq[1]) / (4.0 * area),
            (sq[0] + sq[1] - sq[2]) / (4.0 * area),
        ]
    }

    /// Cotangent weight `(cot a + cot b) / 2` of every edge, where `a` and `b`
    /// are the angles opposite the edge in its two faces.
    pub fn cotan_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n_edges()];
        for (f, fe) in self.face_edges.iter().enumerate() {
            let cot = self.face_cotangents(f);
            for j in 0..3 {
                w[fe[j]] += 0.5 * cot[j];
            }
        }
        w
    }

    /// Sum of the face areas.
    pub fn total_area(&self) -> f64 {
        (0..self.n_faces()).map(|f| self.face_area(f)).sum()
    }

    /// Longest edge length.
    pub fn max_edge_length(&self) -> f64 {
        self.edge_lengths.iter().cloned().fold(0.0, f64::max)
    }

    /// Mixed Voronoi area of every vertex; the areas sum to the total area.
    pub fn vertex_areas(&self) -> Vec<f64> {
        let mut areas = vec![0.0; self.n_vertices()];
        for (f, face) in self.faces.iter().enumerate() {
            let l = self.face_lengths(f);
            let area = heron(l[0], l[1], l[2]);
            let cot = self.face_cotangents(f);
            if let Some(obtuse) = (0..3).find(|&j| cot[j] < 0.0) {
                for j in 0..3 {
                    areas[face[j]] += if j == obtuse { area / 2.0 } else { area / 4.0 };
                }
            } else {
                for j in 0..3 {
                    let (k1, k2) = ((j + 1) % 3, (j + 2) % 3);
                    // Edge j--k1 is opposite k2, edge j--k2 is opposite k1.
                    areas[face[j]] +=
                        (l[k2] * l[k2] * cot[k2] + l[k1] * l[k1] * cot[k1]) / 8.0;
                }
            }
        }
        areas
    }

    /// Copy of the mesh with the coordinates mapped by `f`, re-tagged with
    /// `ambient`. Fails on abstract meshes.
    pub fn map_coords(
        &self,
        ambient: Ambient,
        f: impl Fn(&[f64]) -> Vec<f64>,
    ) -> Result<TriangleMesh> {
        if !self.ambient.has_coordinates() {
            return Err(Error::NoAmbientCoordinates);
        }
        let coords: Vec<f64> = (0..self.n_vertices()).flat_map(|i| f(self.vertex(i))).collect();
        if coords.len() != self.n_vertices() * ambient.coord_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.n_vertices() * ambient.coord_dim(),
                got: coords.len(),
            });
        }
        TriangleMesh::new(coords, self.faces.clone(), ambient)
    }

    /// The same mesh viewed in R^d, dropping the sphere tag.
    pub fn as_euclidean(&self) -> Result<TriangleMesh> {
        let d = self.dim();
        self.map_coords(Ambient::Euclidean(d), |p| p.to_vec())
    }

    pub fn scaled(&self, s: f64) -> Result<TriangleMesh> {
        let d = self.dim();
        self.map_coords(Ambient::Euclidean(d), |p| p.iter().map(|x| x * s).collect())
    }

    pub fn translated(&self, offset: &[f64]) -> Result<TriangleMesh> {
        let d = self.dim();
        if offset.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: offset.len() });
        }
        self.map_coords(Ambient::Euclidean(d), |p| p.iter().zip(offset).map(|(x, o)| x + o).collect())
    }

    /// Relabel vertices: new vertex `perm[i]` is old vertex `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<TriangleMesh> {
        let n = self.n_vertices();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let d = self.dim();
        let mut coords = vec![0.0; self.coords.len()];
        for i in 0..n {
            coords[perm[i] * d..(perm[i] + 1) * d].copy_from_slice(self.vertex(i));
        }
        let faces = self.faces.iter().map(|f| f.map(|v| perm[v])).collect();
        if self.intrinsic {
            let mut inv = vec![0; n];
            for i in 0..n {
                inv[perm[i]] = i;
            }
            let lookup: HashMap<[usize; 2], f64> = self
                .edges
                .iter()
                .zip(&self.edge_lengths)
                .map(|(e, &l)| (*e, l))
                .collect();
            TriangleMesh::new_intrinsic(coords, faces, |a, b| {
                let (a, b) = (inv[a], inv[b]);
                lookup[&[a.min(b), a.max(b)]]
            })
        } else {
            TriangleMesh::new(coords, faces, self.ambient)
        }
    }
}

type EdgeTables = (Vec<[usize; 2]>, Vec<[usize; 3]>);

fn build_edges(coords: &[f64], dim: usize, faces: &[[usize; 3]]) -> Result<EdgeTables> {
    if !coords.len().is_multiple_of(dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: coords.len() % dim });
    }
    let n = coords.len() / dim;
    if n == 0 || faces.is_empty() {
        return Err(Error::Topology("empty mesh".into()));
    }
    if coords.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite vertex coordinate".into()));
    }
    let mut index: HashMap<[usize; 2], usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut face_edges = Vec::with_capacity(faces.len());
    for (f, face) in faces.iter().enumerate() {
        if face.iter().any(|&v| v >= n) {
            return Err(Error::Topology(format!("face {f} references a missing vertex")));
        }
        if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
            return Err(Error::Topology(format!("face {f} repeats a vertex")));
        }
        let mut fe = [0; 3];
        for j in 0..3 {
            let a = face[(j + 1) % 3];
            let b = face[(j + 2) % 3];
            let key = [a.min(b), a.max(b)];
            let e = *index.entry(key).or_insert_with(|| {
                edges.push(key);
                counts.push(0);
                edges.len() - 1
            });
            counts[e] += 1;
            fe[j] = e;
        }
        face_edges.push(fe);
    }
    if let Some(e) = counts.iter().position(|&c| c != 2) {
        return Err(Error::Topology(format!(
            "edge {:?} borders {} faces (closed surfaces need exactly 2)",
            edges[e], counts[e]
        )));
    }
    // Connectivity over the vertex graph; every vertex must be used.
    let mut adj = vec![Vec::new(); n];
    for &[a, b] in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    if reached != n {
        return Err(Error::Topology(format!(
            "mesh is disconnected or has unused vertices ({reached} of {n} reachable)"
        )));
    }
    Ok((edges, face_edges))
}

fn check_orientable(faces: &[[usize; 3]], edges: &[[usize; 2]], face_edges: &[[usize; 3]]) -> bool {
    let mut edge_faces = vec![Vec::with_capacity(2); edges.len()];
    for (f, fe) in face_edges.iter().enumerate() {
        for &e in fe {
            edge_faces[e].push(f);
        }
    }
    // +1 keeps the stored winding, -1 flips it.
    let mut sign = vec![0i8; faces.len()];
    let directed = |f: usize, s: i8, e: usize| -> bool {
        let face = faces[f];
        let [a, b] = edges[e];
        let pos = |v| face.iter().position(|&x| x == v).unwrap();
        let forward = (pos(a) + 1) % 3 == pos(b);
        forward == (s > 0)
    };
    for start in 0..faces.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for &e in &face_edges[f] {
                for &g in &edge_faces[e] {
                    if g == f {
                        continue;
                    }
                    let df = directed(f, sign[f], e);
                    if sign[g] == 0 {
                        // Neighbour must traverse the shared edge the other way.
                        sign[g] = if directed(g, 1, e) != df { 1 } else { -1 };
                        queue.push_back(g);
                    } else if directed(g, sign[g], e) == df {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octahedron() -> TriangleMesh {
        let coords = vec![
            1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0,
            0.0, -1.0,
        ];
        let faces = vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ];
        TriangleMesh::new(coords, faces, Ambient::UnitSphere(2)).unwrap()
    }

    #[test]
    fn octahedron_counts() {
        let m = octahedron();
        assert_eq!(m.n_edges(), 12);
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.orientable());
        assert_eq!(m.genus(), 0);
        let total: f64 = m.vertex_areas().iter().sum();
        let direct: f64 = (0..m.n_faces()).map(|f| m.face_area(f)).sum();
        assert!((total - direct).abs() < 1e-12);
    }

    #[test]
    fn open_mesh_is_rejected() {
        let coords = vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        let err = TriangleMesh::new(coords, vec![[0, 1, 2]], Ambient::Euclidean(3)).unwrap_err();
        assert!(matches!(err, Error::Topology(_)));
    }

    #[test]
    fn off_sphere_vertex_is_rejected() {
        let m = octahedron();
        let mut coords = m.coords().to_vec();
        coords[0] = 1.1;
        let err = TriangleMesh::new(coords, m.faces().to_vec(), Ambient::UnitSphere(2)).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn flipped_face_breaks_nothing_but_orientation_detection_is_global() {
        // Flipping one face of an orientable surface does not make it
        // non-orientable: the consistency search may flip it back.
        let m = octahedron();
        let mut faces = m.faces().to_vec();
        faces[0].swap(0, 1);
        let m2 = TriangleMesh::new(m.coords().to_vec(), faces, Ambient::UnitSphere(2)).unwrap();
        assert!(m2.orientable());
    }
}
