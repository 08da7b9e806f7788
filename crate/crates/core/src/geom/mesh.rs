use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{ElementKind, Signal};
use crate::math::{add, cross, dist, norm, scale, sub, Vec3};

/// An undirected mesh edge with the faces that contain it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// Endpoints, `vertices[0] < vertices[1]`.
    pub vertices: [usize; 2],
    /// Up to two incident faces; only `faces[..face_count.min(2)]` is meaningful.
    pub faces: [usize; 2],
    pub face_count: usize,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.face_count == 1
    }

    pub fn is_manifold(&self) -> bool {
        self.face_count <= 2
    }
}

/// Indexed triangle surface with eagerly computed derived quantities.
///
/// Construction validates indices and rejects degenerate faces and
/// unreferenced vertices; everything is immutable afterwards.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    positions: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    face_areas: Vec<f64>,
    face_centroids: Vec<Vec3>,
    face_normals: Vec<Vec3>,
    dual_areas: Vec<f64>,
    edges: Vec<Edge>,
    mean_edge_length: f64,
    vertex_face_offsets: Vec<usize>,
    vertex_face_indices: Vec<usize>,
}

impl TriangleMesh {
    /// Relative area threshold: faces need area > `1e-12 * mean_edge_length^2`.
    pub const DEGENERATE_AREA_FACTOR: f64 = 1e-12;

    pub fn new(positions: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let n = positions.len();
        for (i, p) in positions.iter().enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteValue { index: i });
            }
        }
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(Error::FaceIndexOutOfRange { face: fi, index: v, vertex_count: n });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::DegenerateFace { face: fi, area: 0.0 });
            }
        }

        let edges = build_edges(&faces);
        let mean_edge_length = edges
            .iter()
            .map(|e| dist(positions[e.vertices[0]], positions[e.vertices[1]]))
            .sum::<f64>()
            / edges.len() as f64;

        let mut face_areas = Vec::with_capacity(faces.len());
        let mut face_centroids = Vec::with_capacity(faces.len());
        let mut face_normals = Vec::with_capacity(faces.len());
        let min_area = Self::DEGENERATE_AREA_FACTOR * mean_edge_length * mean_edge_length;
        for (fi, f) in faces.iter().enumerate() {
            let [a, b, c] = [positions[f[0]], positions[f[1]], positions[f[2]]];
            let n = cross(sub(b, a), sub(c, a));
            let twice_area = norm(n);
            let area = 0.5 * twice_area;
            if !(area > min_area) {
                return Err(Error::DegenerateFace { face: fi, area });
            }
            face_areas.push(area);
            face_centroids.push(scale(add(add(a, b), c), 1.0 / 3.0));
            face_normals.push(scale(n, 1.0 / twice_area));
        }

        let mut dual_areas = alloc::vec![0.0; n];
        let mut counts = alloc::vec![0usize; n + 1];
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                dual_areas[v] += face_areas[fi] / 3.0;
                counts[v + 1] += 1;
            }
        }
        if let Some(vertex) = dual_areas.iter().position(|&a| !(a > 0.0)) {
            return Err(Error::IsolatedVertex { vertex });
        }
        for v in 0..n {
            counts[v + 1] += counts[v];
        }
        let vertex_face_offsets = counts.clone();
        let mut cursor = counts;
        let mut vertex_face_indices = alloc::vec![0usize; 3 * faces.len()];
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                vertex_face_indices[cursor[v]] = fi;
                cursor[v] += 1;
            }
        }

        Ok(Self {
            positions,
            faces,
            face_areas,
            face_centroids,
            face_normals,
            dual_areas,
            edges,
            mean_edge_length,
            vertex_face_offsets,
            vertex_face_indices,
        })
    }

    /// Same connectivity, new vertex positions (revalidated).
    pub fn with_positions(&self, positions: Vec<Vec3>) -> Result<Self> {
        if positions.len() != self.positions.len() {
            return Err(Error::ShapeMismatch {
                expected: self.positions.len(),
                found: positions.len(),
            });
        }
        Self::new(positions, self.faces.clone())
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mean_edge_length(&self) -> f64 {
        self.mean_edge_length
    }

    pub fn face_area(&self, f: usize) -> f64 {
        self.face_areas[f]
    }

    pub fn face_areas_slice(&self) -> &[f64] {
        &self.face_areas
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        self.face_centroids[f]
    }

    pub fn face_normal(&self, f: usize) -> Vec3 {
        self.face_normals[f]
    }

    pub fn face_normals_slice(&self) -> &[Vec3] {
        &self.face_normals
    }

    /// Barycentric dual area: a third of the incident face areas.
    pub fn dual_area(&self, v: usize) -> f64 {
        self.dual_areas[v]
    }

    pub fn dual_areas(&self) -> &[f64] {
        &self.dual_areas
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_face_indices[self.vertex_face_offsets[v]..self.vertex_face_offsets[v + 1]]
    }

    /// Faces sharing an edge with `f` (boundary and non-manifold edges skipped).
    pub fn face_neighbors(&self, f: usize) -> impl Iterator<Item = usize> + '_ {
        let [a, b, c] = self.faces[f];
        [(a, b), (b, c), (c, a)].into_iter().filter_map(move |(u, v)| {
            let e = self.find_edge(u, v)?;
            let edge = &self.edges[e];
            (edge.face_count == 2).then(|| if edge.faces[0] == f { edge.faces[1] } else { edge.faces[0] })
        })
    }

    /// Index of the undirected edge `(u, v)`, if present.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { [u, v] } else { [v, u] };
        self.edges.binary_search_by(|e| e.vertices.cmp(&key)).ok()
    }

    pub fn face_normals(&self) -> Signal {
        Signal::from_vectors(ElementKind::Face, &self.face_normals).expect("finite normals")
    }

    pub fn face_centroids(&self) -> Signal {
        Signal::from_vectors(ElementKind::Face, &self.face_centroids).expect("finite centroids")
    }

    pub fn face_areas(&self) -> Signal {
        Signal::scalar(ElementKind::Face, self.face_areas.clone()).expect("finite areas")
    }

    pub fn position_signal(&self) -> Signal {
        Signal::from_vectors(ElementKind::Vertex, &self.positions).expect("finite positions")
    }

    pub fn total_area(&self) -> f64 {
        self.face_areas.iter().sum()
    }

    /// Applies `map` to every vertex position.
    pub fn transformed(&self, map: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        self.with_positions(self.positions.iter().map(|&p| map(p)).collect())
    }
}

fn build_edges(faces: &[[usize; 3]]) -> Vec<Edge> {
    let mut half: Vec<([usize; 2], usize)> = Vec::with_capacity(faces.len() * 3);
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (f[k], f[(k + 1) % 3]);
            half.push((if u < v { [u, v] } else { [v, u] }, fi));
        }
    }
    half.sort_unstable();
    let mut edges: Vec<Edge> = Vec::with_capacity(half.len() / 2 + 1);
    for (key, fi) in half {
        match edges.last_mut() {
            Some(e) if e.vertices == key => {
                if e.face_count < 2 {
                    e.faces[e.face_count] = fi;
                }
                e.face_count += 1;
            }
            _ => edges.push(Edge { vertices: key, faces: [fi, usize::MAX], face_count: 1 }),
        }
    }
    edges
}
