use alloc::vec::Vec;

use crate::diffusion::MassMatrix;
use crate::error::{Error, Result};
use crate::geom::{ElementKind, Signal, TriangleMesh};
use crate::math::{add, dot, norm, normalize, scale, Vec3};
use crate::sparse::SparseOperator;

/// Area-weighted average of incident face normals, renormalized.
pub fn vertex_normals(mesh: &TriangleMesh) -> Signal {
    let normals: Vec<Vec3> = (0..mesh.vertex_count()).map(|v| area_weighted_normal(mesh, v)).collect();
    Signal::from_vectors(ElementKind::Vertex, &normals).expect("finite normals")
}

fn area_weighted_normal(mesh: &TriangleMesh, v: usize) -> Vec3 {
    let sum = mesh
        .vertex_faces(v)
        .iter()
        .fold([0.0; 3], |acc, &f| add(acc, scale(mesh.face_normal(f), mesh.face_area(f))));
    // Opposing faces can cancel on pathological fans; fall back to any incident normal.
    normalize(sum).unwrap_or_else(|| mesh.face_normal(mesh.vertex_faces(v)[0]))
}

/// Signed mean curvature per vertex: `|A^{-1} L x| / 2`, positive where the
/// Laplacian of position points along the outward vertex normal (convex).
pub fn mean_curvature(mesh: &TriangleMesh, laplacian: &SparseOperator, mass: &MassMatrix) -> Result<Signal> {
    let n = mesh.vertex_count();
    if laplacian.dim() != n || mass.len() != n {
        return Err(Error::ShapeMismatch { expected: n, found: laplacian.dim() });
    }
    let positions = mesh.positions();
    let mut lx = alloc::vec![[0.0f64; 3]; n];
    for (r, c, v) in laplacian.triplets() {
        for k in 0..3 {
            lx[r][k] += v * positions[c][k];
        }
    }
    let normals = vertex_normals(mesh);
    let values = (0..n)
        .map(|v| {
            let hn = scale(lx[v], 1.0 / mass.diagonal()[v]);
            let h = 0.5 * norm(hn);
            if dot(normals.vec3(v), hn) < 0.0 {
                -h
            } else {
                h
            }
        })
        .collect();
    Signal::scalar(ElementKind::Vertex, values)
}
