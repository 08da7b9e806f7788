use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{inverse3, mat_vec, normalize, Mat3, Vec3};
use crate::shapes;

/// Coefficients below this count as outside a face during point location.
const INSIDE_TOLERANCE: f64 = -1e-12;

/// A convex triangulated polyhedron with vertices on the unit sphere,
/// used to locate directions and produce barycentric hat weights.
#[derive(Debug, Clone)]
pub struct SphericalPolyhedron {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    inverses: Vec<Mat3>,
}

impl SphericalPolyhedron {
    /// The icosahedron subdivided `level` times, vertices projected to the sphere.
    pub fn icosphere(level: usize) -> Self {
        let (vertices, faces) = shapes::icosphere_raw(level);
        Self::new(vertices, faces).expect("icosphere faces are non-degenerate")
    }

    /// Builds the point-location tables. Vertices must be unit length and
    /// every face must span a non-degenerate cone from the origin.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        for (index, v) in vertices.iter().enumerate() {
            let n = crate::math::norm(*v);
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::NonUnitVector { index, norm: n });
            }
        }
        let mut inverses = Vec::with_capacity(faces.len());
        for (face, f) in faces.iter().enumerate() {
            for &index in f {
                if index >= vertices.len() {
                    return Err(Error::FaceIndexOutOfRange { face, index, vertex_count: vertices.len() });
                }
            }
            let [a, b, c] = [vertices[f[0]], vertices[f[1]], vertices[f[2]]];
            // Columns are the corner directions, so M^-1 p gives cone coordinates.
            let m = [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]];
            let inv = inverse3(&m).ok_or(Error::DegenerateFace { face, area: 0.0 })?;
            inverses.push(inv);
        }
        Ok(Self { vertices, faces, inverses })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// The face hit by the ray from the origin along `direction`, with
    /// barycentric weights on that face (nonnegative, summing to 1).
    /// Shared edges go to the lowest-indexed face.
    pub fn locate(&self, direction: Vec3) -> (usize, [f64; 3]) {
        let mut best = (0, [1.0 / 3.0; 3]);
        let mut best_min = f64::NEG_INFINITY;
        for (face, inv) in self.inverses.iter().enumerate() {
            let c = mat_vec(inv, direction);
            let min = c[0].min(c[1]).min(c[2]);
            if min >= INSIDE_TOLERANCE {
                return (face, clamp_barycentric(c));
            }
            if min > best_min {
                best_min = min;
                best = (face, c);
            }
        }
        // Only reachable through rounding on a seam; the nearest face is used.
        (best.0, clamp_barycentric(best.1))
    }

    /// The polyhedron with every vertex rotated by `r`.
    pub fn rotated(&self, r: &Mat3) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|&v| normalize(mat_vec(r, v)).ok_or(Error::InvalidParameter("rotation must be invertible")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, self.faces.clone())
    }
}

fn clamp_barycentric(c: [f64; 3]) -> [f64; 3] {
    let c = [c[0].max(0.0), c[1].max(0.0), c[2].max(0.0)];
    let s = c[0] + c[1] + c[2];
    if s > 0.0 {
        [c[0] / s, c[1] / s, c[2] / s]
    } else {
        [1.0 / 3.0; 3]
    }
}

/// Four unit directions at the vertices of a regular tetrahedron.
pub fn tetrahedron_directions() -> Vec<Vec3> {
    let s = 1.0 / crate::math::sqrt(3.0);
    alloc::vec![[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn vertices_locate_to_themselves() {
        let poly = SphericalPolyhedron::icosphere(1);
        for (i, &v) in poly.vertices().iter().enumerate() {
            let (face, w) = poly.locate(v);
            let corner = poly.faces()[face].iter().position(|&k| k == i).unwrap();
            assert!((w[corner] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_reproduce_direction_of_hit_point() {
        let poly = SphericalPolyhedron::icosphere(0);
        let mut rng = Rng::new(3);
        for _ in 0..1000 {
            let p = rng.unit_vector();
            let (face, w) = poly.locate(p);
            let f = poly.faces()[face];
            let mut q = [0.0; 3];
            for k in 0..3 {
                for d in 0..3 {
                    q[d] += w[k] * poly.vertices()[f[k]][d];
                }
            }
            let q = normalize(q).unwrap();
            assert!(crate::math::angle_between(p, q) < 1e-9);
        }
    }

    #[test]
    fn tetrahedron_is_unit() {
        for d in tetrahedron_directions() {
            assert!((crate::math::norm(d) - 1.0).abs() < 1e-15);
        }
    }
}
