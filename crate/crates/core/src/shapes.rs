//! Procedural meshes and images used as fixtures by tests, the acceptance
//! suite and the CLI `generate` command.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::geom::{ElementKind, GridDomain, Signal, TriangleMesh};
use crate::math::{add, cos, cross, dot, norm, normalize, scale, sin, sqrt, sub, Vec3};
use crate::rng::Rng;

/// Axis-aligned cube of side 1 centered at the origin, 12 faces.
pub fn unit_cube() -> TriangleMesh {
    subdivided_cube(1)
}

/// Cube of side 1 centered at the origin; each side is an `n x n` grid of
/// quads split along the same diagonal. Faces are wound outward.
pub fn subdivided_cube(n: usize) -> TriangleMesh {
    let n = n.max(1);
    let mut index: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    let mut vertex = |key: [usize; 3], positions: &mut Vec<Vec3>| -> usize {
        *index.entry(key).or_insert_with(|| {
            positions.push([
                key[0] as f64 / n as f64 - 0.5,
                key[1] as f64 / n as f64 - 0.5,
                key[2] as f64 / n as f64 - 0.5,
            ]);
            positions.len() - 1
        })
    };
    for axis in 0..3 {
        let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
        for side in [0usize, n] {
            for i in 0..n {
                for j in 0..n {
                    let mut corner = |di: usize, dj: usize, positions: &mut Vec<Vec3>| {
                        let mut key = [0usize; 3];
                        key[axis] = side;
                        key[u] = i + di;
                        key[v] = j + dj;
                        vertex(key, positions)
                    };
                    let a = corner(0, 0, &mut positions);
                    let b = corner(1, 0, &mut positions);
                    let c = corner(1, 1, &mut positions);
                    let d = corner(0, 1, &mut positions);
                    if side == n {
                        faces.push([a, b, c]);
                        faces.push([a, c, d]);
                    } else {
                        faces.push([a, c, b]);
                        faces.push([a, d, c]);
                    }
                }
            }
        }
    }
    TriangleMesh::new(positions, faces).expect("valid cube")
}

/// Unit-radius icosahedron vertices and outward faces.
pub fn icosahedron_raw() -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let t = (1.0 + sqrt(5.0)) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let positions = raw.iter().map(|&p| normalize(p).unwrap()).collect();
    let faces = alloc::vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (positions, faces)
}

/// Icosahedron with `level` rounds of midpoint subdivision, vertices on the
/// unit sphere. Level 0 has 12 vertices, level 1 has 42, level 2 has 162.
pub fn icosphere_raw(level: usize) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let (mut positions, mut faces) = icosahedron_raw();
    for _ in 0..level {
        let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = |a: usize, b: usize, positions: &mut Vec<Vec3>| {
                let key = if a < b { (a, b) } else { (b, a) };
                *midpoints.entry(key).or_insert_with(|| {
                    let m = normalize(add(positions[a], positions[b])).unwrap();
                    positions.push(m);
                    positions.len() - 1
                })
            };
            let ab = mid(f[0], f[1], &mut positions);
            let bc = mid(f[1], f[2], &mut positions);
            let ca = mid(f[2], f[0], &mut positions);
            next.push([f[0], ab, ca]);
            next.push([f[1], bc, ab]);
            next.push([f[2], ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    (positions, faces)
}

pub fn icosphere(level: usize, radius: f64) -> TriangleMesh {
    let (p, f) = icosphere_raw(level);
    TriangleMesh::new(p.into_iter().map(|x| scale(x, radius)).collect(), f).expect("valid icosphere")
}

/// Geodesic sphere: every icosahedron face split into `frequency^2`
/// triangles, projected to the sphere. `10 f^2 + 2` vertices, `20 f^2` faces.
pub fn geodesic_sphere(frequency: usize, radius: f64) -> TriangleMesh {
    let k = frequency.max(1);
    let (base, base_faces) = icosahedron_raw();
    let mut index: BTreeMap<[(usize, usize); 3], usize> = BTreeMap::new();
    let mut positions: Vec<Vec3> = Vec::new();
    let mut faces = Vec::new();
    for f in &base_faces {
        let mut ids = alloc::vec![alloc::vec![0usize; k + 1]; k + 1];
        for i in 0..=k {
            for j in 0..=(k - i) {
                let l = k - i - j;
                let mut key = [(f[0], i), (f[1], j), (f[2], l)];
                key.sort_unstable();
                for e in key.iter_mut() {
                    if e.1 == 0 {
                        *e = (usize::MAX, 0);
                    }
                }
                key.sort_unstable();
                let id = *index.entry(key).or_insert_with(|| {
                    let p = add(
                        add(scale(base[f[0]], i as f64), scale(base[f[1]], j as f64)),
                        scale(base[f[2]], l as f64),
                    );
                    positions.push(scale(normalize(p).unwrap(), radius));
                    positions.len() - 1
                });
                ids[i][j] = id;
            }
        }
        // Walk the lattice; (i, j) weights on corners 0 and 1.
        for i in 0..k {
            for j in 0..(k - i) {
                faces.push([ids[i + 1][j], ids[i][j + 1], ids[i][j]]);
                if j + 1 < k - i {
                    faces.push([ids[i + 1][j], ids[i + 1][j + 1], ids[i][j + 1]]);
                }
            }
        }
    }
    orient_outward(&positions, &mut faces);
    TriangleMesh::new(positions, faces).expect("valid geodesic sphere")
}

fn orient_outward(positions: &[Vec3], faces: &mut [[usize; 3]]) {
    for f in faces.iter_mut() {
        let [a, b, c] = [positions[f[0]], positions[f[1]], positions[f[2]]];
        let n = cross(sub(b, a), sub(c, a));
        if dot(n, add(add(a, b), c)) < 0.0 {
            f.swap(1, 2);
        }
    }
}

/// `n` points on the unit sphere along a Fibonacci spiral.
pub fn fibonacci_sphere_points(n: usize) -> Vec<Vec3> {
    let golden = core::f64::consts::PI * (3.0 - sqrt(5.0));
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = sqrt((1.0 - z * z).max(0.0));
            let phi = golden * i as f64;
            [r * cos(phi), r * sin(phi), z]
        })
        .collect()
}

/// Sphere mesh with exactly `n` vertices: the convex hull of a Fibonacci
/// point set (`n >= 4`).
pub fn fibonacci_sphere(n: usize, radius: f64) -> TriangleMesh {
    let points = fibonacci_sphere_points(n.max(4));
    let faces = convex_hull(&points);
    TriangleMesh::new(points.into_iter().map(|p| scale(p, radius)).collect(), faces)
        .expect("valid hull")
}

/// Incremental convex hull for points in general position. Quadratic, meant
/// for fixture sizes.
fn convex_hull(points: &[Vec3]) -> Vec<[usize; 3]> {
    let eps = 1e-12;
    let orient = |f: &[usize; 3], p: Vec3| {
        let [a, b, c] = [points[f[0]], points[f[1]], points[f[2]]];
        dot(cross(sub(b, a), sub(c, a)), sub(p, a))
    };
    let fourth = (3..points.len())
        .find(|&i| orient(&[0, 1, 2], points[i]).abs() > eps)
        .expect("points are not coplanar");
    let mut faces: Vec<[usize; 3]> = alloc::vec![[0, 1, 2], [0, 1, fourth], [0, 2, fourth], [1, 2, fourth]];
    let interior = scale(add(add(points[0], points[1]), add(points[2], points[fourth])), 0.25);
    for f in faces.iter_mut() {
        if orient(f, interior) > 0.0 {
            f.swap(1, 2);
        }
    }
    let mut alive = alloc::vec![true; 4];
    let mut edge_face: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edge_face.insert((f[k], f[(k + 1) % 3]), fi);
        }
    }
    for p in 3..points.len() {
        if p == fourth {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&fi| alive[fi] && orient(&faces[fi], points[p]) > eps)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut is_visible = alloc::vec![false; faces.len()];
        for &fi in &visible {
            is_visible[fi] = true;
        }
        let mut horizon = Vec::new();
        for &fi in &visible {
            let f = faces[fi];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let twin = edge_face[&(b, a)];
                if !is_visible[twin] {
                    horizon.push((a, b));
                }
            }
        }
        for &fi in &visible {
            alive[fi] = false;
            let f = faces[fi];
            for k in 0..3 {
                edge_face.remove(&(f[k], f[(k + 1) % 3]));
            }
        }
        for (a, b) in horizon {
            let fi = faces.len();
            faces.push([a, b, p]);
            alive.push(true);
            edge_face.insert((a, b), fi);
            edge_face.insert((b, p), fi);
            edge_face.insert((p, a), fi);
        }
    }
    faces.into_iter().zip(alive).filter_map(|(f, a)| a.then_some(f)).collect()
}

/// Open cylinder around the z axis: `rings` vertex rings, `segments` per ring.
pub fn cylinder(radius: f64, height: f64, rings: usize, segments: usize) -> TriangleMesh {
    let mut positions = Vec::with_capacity(rings * segments);
    for r in 0..rings {
        let z = height * (r as f64 / (rings - 1) as f64 - 0.5);
        for s in 0..segments {
            let t = 2.0 * core::f64::consts::PI * s as f64 / segments as f64;
            positions.push([radius * cos(t), radius * sin(t), z]);
        }
    }
    let mut faces = Vec::new();
    for r in 0..rings - 1 {
        for s in 0..segments {
            let a = r * segments + s;
            let b = r * segments + (s + 1) % segments;
            let c = a + segments;
            let d = b + segments;
            faces.push([a, b, d]);
            faces.push([a, d, c]);
        }
    }
    TriangleMesh::new(positions, faces).expect("valid cylinder")
}

/// Flat `nx x ny` quad grid in the z = 0 plane, quads split on one diagonal.
pub fn grid_patch(nx: usize, ny: usize, spacing: f64) -> TriangleMesh {
    height_field(nx, ny, spacing, |_, _| 0.0)
}

/// Grid patch lifted by `z = height(x, y)`.
pub fn height_field(nx: usize, ny: usize, spacing: f64, height: impl Fn(f64, f64) -> f64) -> TriangleMesh {
    let mut positions = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let (x, y) = (i as f64 * spacing, j as f64 * spacing);
            positions.push([x, y, height(x, y)]);
        }
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut faces = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    TriangleMesh::new(positions, faces).expect("valid grid")
}

/// Flat patch of equilateral triangles with unit edges.
pub fn equilateral_patch(nx: usize, ny: usize) -> TriangleMesh {
    let h = sqrt(3.0) / 2.0;
    let mut positions = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let shift = if j % 2 == 1 { 0.5 } else { 0.0 };
        for i in 0..=nx {
            positions.push([i as f64 + shift, j as f64 * h, 0.0]);
        }
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut faces = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if j % 2 == 0 {
                faces.push([idx(i, j), idx(i + 1, j), idx(i, j + 1)]);
                faces.push([idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            } else {
                faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
                faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            }
        }
    }
    TriangleMesh::new(positions, faces).expect("valid equilateral patch")
}

/// Roof-shaped wedge: two planar flanks `z = -|x|` meeting at a straight
/// crease along `x = 0` with a 90 degree dihedral angle. `n` cells per flank
/// across, `2n` along the crease; the crease is a row of mesh edges.
pub fn wedge(n: usize) -> TriangleMesh {
    let spacing = 1.0 / n as f64;
    let mut mesh = height_field(2 * n, 2 * n, spacing, |x, _| -(x - 1.0).abs());
    let shifted: Vec<Vec3> = mesh.positions().iter().map(|p| [p[0] - 1.0, p[1] - 1.0, p[2]]).collect();
    mesh = mesh.with_positions(shifted).expect("valid wedge");
    mesh
}

/// Smooth-plus-edges grayscale test image in `[0, 1]`: a horizontal ramp,
/// a bright disc, a dark bar and additive Gaussian noise of std `noise`.
pub fn test_image(width: usize, height: usize, noise: f64, seed: u64) -> (GridDomain, Signal) {
    let grid = GridDomain::new(width, height).expect("non-empty image");
    let mut rng = Rng::new(seed);
    let mut values = Vec::with_capacity(grid.len());
    let (w, h) = (width as f64, height as f64);
    for y in 0..height {
        for x in 0..width {
            let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
            let mut v = 0.15 + 0.3 * fx / w;
            let (dx, dy) = (fx - 0.62 * w, fy - 0.4 * h);
            if dx * dx + dy * dy < (0.22 * w) * (0.22 * w) {
                v = 0.85;
            }
            if fy > 0.72 * h && fy < 0.86 * h && fx > 0.1 * w && fx < 0.8 * w {
                v = 0.05;
            }
            v += noise * rng.normal();
            values.push(v.clamp(0.0, 1.0));
        }
    }
    (grid, Signal::scalar(ElementKind::Pixel, values).expect("finite image"))
}

/// Mean of the vertex positions.
pub fn centroid(mesh: &TriangleMesh) -> Vec3 {
    let sum = mesh.positions().iter().fold([0.0; 3], |acc, &p| add(acc, p));
    scale(sum, 1.0 / mesh.vertex_count() as f64)
}

/// Largest distance of any vertex from the origin.
pub fn max_radius(mesh: &TriangleMesh) -> f64 {
    mesh.positions().iter().map(|&p| norm(p)).fold(0.0, f64::max)
}
