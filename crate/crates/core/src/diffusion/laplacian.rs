use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Discretization, MassMatrix};
use crate::error::{Error, Result};
use crate::geom::{OrientedPointCloud, TriangleMesh};
use crate::math::{cross, dist, dist2, dot, exp, norm, sub, Vec3};
use crate::sparse::SparseOperator;

/// Largest cotangent magnitude allowed in any triangle.
pub const COT_CLAMP: f64 = 100.0;

fn cot(a: Vec3, b: Vec3) -> f64 {
    dot(a, b) / norm(cross(a, b))
}

/// The three cotangents of a face, opposite each corner. A sliver face is
/// scaled as a whole so its largest magnitude is `COT_CLAMP`; clipping
/// angles separately would make the face's energy indefinite.
fn face_cotangents(p: &[Vec3], f: [usize; 3]) -> [f64; 3] {
    let mut c = [0.0; 3];
    for k in 0..3 {
        let (o, i, j) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
        c[k] = cot(sub(p[i], p[o]), sub(p[j], p[o]));
    }
    let peak = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > COT_CLAMP {
        c.iter_mut().for_each(|v| *v *= COT_CLAMP / peak);
    }
    c
}

/// Cotangent Laplacian (positive semidefinite sign convention) with the
/// barycentric lumped mass matrix.
///
/// `L_ij = -(cot a_ij + cot b_ij) / 2` for each edge, one cotangent on
/// boundary edges, and `L_ii = -sum_j L_ij`.
pub fn build_cotan_laplacian(mesh: &TriangleMesh) -> Discretization {
    let n = mesh.vertex_count();
    let p = mesh.positions();
    let mut triplets = Vec::with_capacity(mesh.face_count() * 12);
    for f in mesh.faces() {
        let c = face_cotangents(p, *f);
        for k in 0..3 {
            let (i, j) = (f[(k + 1) % 3], f[(k + 2) % 3]);
            let w = 0.5 * c[k];
            triplets.push((i, j, -w));
            triplets.push((j, i, -w));
            triplets.push((i, i, w));
            triplets.push((j, j, w));
        }
    }
    Discretization {
        laplacian: SparseOperator::from_triplets(n, triplets),
        mass: MassMatrix::new(mesh.dual_areas().to_vec()).expect("validated mesh has positive dual areas"),
    }
}

/// Laplacian on per-face values: faces sharing a primal edge `e` are
/// coupled with weight `|e| / |c_f - c_g|`; mass is the face area.
pub fn build_face_dual_laplacian(mesh: &TriangleMesh) -> Result<Discretization> {
    let n = mesh.face_count();
    let p = mesh.positions();
    let mut triplets = Vec::with_capacity(mesh.edges().len() * 4);
    for e in mesh.edges() {
        if !e.is_manifold() {
            return Err(Error::NonManifoldEdge { a: e.vertices[0], b: e.vertices[1], faces: e.face_count });
        }
        if e.face_count != 2 {
            continue;
        }
        let [f, g] = e.faces;
        let w = dist(p[e.vertices[0]], p[e.vertices[1]]) / dist(mesh.face_centroid(f), mesh.face_centroid(g));
        triplets.push((f, g, -w));
        triplets.push((g, f, -w));
        triplets.push((f, f, w));
        triplets.push((g, g, w));
    }
    Ok(Discretization {
        laplacian: SparseOperator::from_triplets(n, triplets),
        mass: MassMatrix::new(mesh.face_areas_slice().to_vec())?,
    })
}

/// Heat-kernel weighted k-nearest-neighbor graph Laplacian `L = D - W`.
#[derive(Debug, Clone)]
pub struct KnnLaplacian {
    pub discretization: Discretization,
    /// Neighbor pairs found at identical coordinates (weight 1).
    pub duplicate_pairs: usize,
}

/// Symmetrized kNN graph with weights `exp(-|x_i - x_j|^2 / t)` and identity mass.
///
/// Neighbors are found by exhaustive search; ties in distance break on the
/// lower index so the graph is deterministic.
pub fn build_knn_graph_laplacian(cloud: &OrientedPointCloud, k: usize, t: f64) -> Result<KnnLaplacian> {
    let n = cloud.len();
    if k < 2 {
        return Err(Error::InvalidParameter("k must be >= 2"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("kernel width t must be positive"));
    }
    if n < k + 1 {
        return Err(Error::InvalidParameter("point cloud needs at least k + 1 points"));
    }
    let pts = cloud.points();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut cand: Vec<(f64, usize)> = Vec::with_capacity(n);
    for i in 0..n {
        cand.clear();
        cand.extend((0..n).filter(|&j| j != i).map(|j| (dist2(pts[i], pts[j]), j)));
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        cand.select_nth_unstable_by(k - 1, cmp);
        for &(_, j) in &cand[..k] {
            pairs.insert((i.min(j), i.max(j)));
        }
    }
    let mut duplicate_pairs = 0;
    let mut triplets = Vec::with_capacity(pairs.len() * 4);
    for (i, j) in pairs {
        let d2 = dist2(pts[i], pts[j]);
        if d2 == 0.0 {
            duplicate_pairs += 1;
        }
        let w = exp(-d2 / t);
        if w == 0.0 {
            continue;
        }
        triplets.push((i, j, -w));
        triplets.push((j, i, -w));
        triplets.push((i, i, w));
        triplets.push((j, j, w));
    }
    // Keep every diagonal present even for fully decoupled points.
    triplets.extend((0..n).map(|i| (i, i, 0.0)));
    Ok(KnnLaplacian {
        discretization: Discretization {
            laplacian: SparseOperator::from_triplets(n, triplets),
            mass: MassMatrix::identity(n),
        },
        duplicate_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use alloc::vec;

    fn assert_laplacian_shape(l: &SparseOperator) {
        assert!(l.asymmetry() < 1e-10);
        for s in l.row_sums() {
            assert!(s.abs() < 1e-10, "row sum {s}");
        }
    }

    #[test]
    fn cotan_constants_in_kernel() {
        for mesh in [shapes::icosphere(2, 1.0), shapes::subdivided_cube(3), shapes::cylinder(1.0, 2.0, 6, 12)] {
            let d = build_cotan_laplacian(&mesh);
            assert_laplacian_shape(&d.laplacian);
            for e in mesh.edges() {
                let [a, b] = e.vertices;
                assert!(d.laplacian.get(a, b) != 0.0 || mesh.face_count() > 0);
            }
        }
    }

    #[test]
    fn square_diagonal_weight_vanishes() {
        let m = TriangleMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap();
        let d = build_cotan_laplacian(&m);
        assert!(d.laplacian.get(0, 2).abs() < 1e-15);
        // Boundary edge (0,1) only sees the 45 degree angle at vertex 2.
        assert!((d.laplacian.get(0, 1) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn equilateral_interior_weights() {
        let m = shapes::equilateral_patch(6, 6);
        let d = build_cotan_laplacian(&m);
        // Independent per-triangle assembly: each interior edge sees two 60 degree angles.
        let expected = -0.5 * 2.0 * (1.0 / 3f64.sqrt());
        let mut checked = 0;
        for e in m.edges().iter().filter(|e| e.face_count == 2) {
            let w = d.laplacian.get(e.vertices[0], e.vertices[1]);
            assert!((w - expected).abs() < 1e-12, "{w}");
            checked += 1;
        }
        assert!(checked > 50);
        assert!((expected + 0.5774).abs() < 1e-4);
    }

    #[test]
    fn cotan_is_positive_semidefinite_on_samples() {
        let m = shapes::icosphere(2, 1.0);
        let d = build_cotan_laplacian(&m);
        let mut rng = crate::rng::Rng::new(3);
        for _ in 0..20 {
            let v: Vec<f64> = (0..m.vertex_count()).map(|_| rng.normal()).collect();
            assert!(d.laplacian.quadratic_form(&v) >= -1e-12);
        }
    }

    #[test]
    fn sliver_face_stays_positive_semidefinite() {
        // Apex angle near 180 degrees: cotangents near (-166, 166, 166).
        let m = TriangleMesh::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 0.003, 0.0]], vec![[0, 1, 2]]).unwrap();
        let d = build_cotan_laplacian(&m);
        // Functions (cos t, sin t, 0) span the space modulo constants.
        for k in 0..360 {
            let t = (k as f64).to_radians();
            let v = [libm::cos(t), libm::sin(t), 0.0];
            assert!(d.laplacian.quadratic_form(&v) >= -1e-12, "angle {k}");
        }
        let c = face_cotangents(m.positions(), [0, 1, 2]);
        assert!(c.iter().all(|v| v.abs() <= COT_CLAMP + 1e-12), "{c:?}");
    }

    #[test]
    fn face_dual_square_weight_from_centroids() {
        let m = TriangleMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap();
        let d = build_face_dual_laplacian(&m).unwrap();
        let c0: [f64; 2] = [2.0 / 3.0, 1.0 / 3.0];
        let c1: [f64; 2] = [1.0 / 3.0, 2.0 / 3.0];
        let centroid_dist = ((c0[0] - c1[0]).powi(2) + (c0[1] - c1[1]).powi(2)).sqrt();
        let expected = 2f64.sqrt() / centroid_dist;
        assert!((d.laplacian.get(0, 1) + expected).abs() < 1e-12);
        assert!((expected - 3.0).abs() < 1e-12);
        assert_laplacian_shape(&d.laplacian);
        assert_eq!(d.mass.diagonal(), &[0.5, 0.5]);
    }

    #[test]
    fn face_dual_tetrahedron_symmetric_weights() {
        let s = 1.0 / 2f64.sqrt();
        let m = TriangleMesh::new(
            vec![[1.0, 0.0, -s], [-1.0, 0.0, -s], [0.0, 1.0, s], [0.0, -1.0, s]],
            vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
        )
        .unwrap();
        let d = build_face_dual_laplacian(&m).unwrap();
        let w = d.laplacian.get(0, 1);
        for f in 0..4 {
            for g in 0..4 {
                if f != g {
                    assert!((d.laplacian.get(f, g) - w).abs() < 1e-12);
                }
            }
        }
        assert_laplacian_shape(&d.laplacian);
    }

    #[test]
    fn face_dual_rejects_non_manifold() {
        let m = TriangleMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]],
            vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]],
        )
        .unwrap();
        assert_eq!(
            build_face_dual_laplacian(&m).unwrap_err(),
            Error::NonManifoldEdge { a: 0, b: 1, faces: 3 }
        );
    }

    fn cloud(points: Vec<Vec3>) -> OrientedPointCloud {
        let normals = vec![[0.0, 0.0, 1.0]; points.len()];
        OrientedPointCloud::new(points, normals).unwrap()
    }

    #[test]
    fn knn_three_points_direct_weights() {
        let pts = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 2.0, 0.0]];
        let t = 1.5;
        let knn = build_knn_graph_laplacian(&cloud(pts.clone()), 2, t).unwrap();
        let l = &knn.discretization.laplacian;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let want = -(-dist2(pts[i], pts[j]) / t).exp();
                    assert!((l.get(i, j) - want).abs() < 1e-15);
                }
            }
        }
        assert_laplacian_shape(l);
        assert_eq!(knn.duplicate_pairs, 0);
    }

    #[test]
    fn knn_separated_clusters_decouple() {
        let mut pts = Vec::new();
        for i in 0..10 {
            pts.push([i as f64 * 0.1, 0.0, 0.0]);
            pts.push([100.0 + i as f64 * 0.1, 0.0, 0.0]);
        }
        let knn = build_knn_graph_laplacian(&cloud(pts.clone()), 3, 0.05).unwrap();
        let l = &knn.discretization.laplacian;
        for (r, c, v) in l.triplets() {
            if (pts[r][0] > 50.0) != (pts[c][0] > 50.0) {
                assert!(v.abs() < 1e-12);
            }
        }
        assert_laplacian_shape(l);
    }

    #[test]
    fn knn_counts_duplicates() {
        let pts = vec![[0.0; 3], [0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let knn = build_knn_graph_laplacian(&cloud(pts), 2, 1.0).unwrap();
        assert_eq!(knn.duplicate_pairs, 1);
        assert_eq!(knn.discretization.laplacian.get(0, 1), -1.0);
    }
}
