use alloc::vec::Vec;

use super::kernel::RangeKernel;
use super::sphere::SphericalPolyhedron;
use crate::error::{Error, Result};
use crate::math::{acos, dot, exp, mat_vec, norm, normalize, Mat3, Vec3};
use crate::shapes;

/// Subdivision level of the icosphere used to integrate spherical partitions.
const SPHERE_QUADRATURE_LEVEL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    /// The unit interval `[0, 1]`.
    Interval,
    /// The unit box `[0, 1]^dim`.
    Box { dim: usize },
    /// The unit sphere in three dimensions.
    Sphere,
}

impl Manifold {
    /// Coordinates per point.
    pub fn dim(&self) -> usize {
        match self {
            Manifold::Interval => 1,
            Manifold::Box { dim } => *dim,
            Manifold::Sphere => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionScheme {
    /// Piecewise linear hats on a regular grid.
    Hat,
    /// Barycentric hats on an inscribed polyhedron.
    SphericalHat,
    /// Normalized Von Mises-Fisher bumps centered at scattered samples.
    VmfMeshless,
}

#[derive(Debug, Clone)]
enum Partition {
    Hat { per_axis: usize },
    SphericalHat(SphericalPolyhedron),
    Meshless { bump_width: f64 },
}

/// Samples on the range manifold with a kernel and a partition of unity.
///
/// Immutable once built; every evaluation is a pure function.
#[derive(Debug, Clone)]
pub struct RangeSpace {
    manifold: Manifold,
    samples: Vec<f64>,
    kernel: RangeKernel,
    partition: Partition,
}

impl RangeSpace {
    /// `m` equally spaced samples on `[0, 1]` with hats of support `2/(m-1)`
    /// and a Gaussian kernel of width `sigma`.
    pub fn interval(m: usize, sigma: f64) -> Result<Self> {
        Self::unit_box(1, m, sigma).map(|mut s| {
            s.manifold = Manifold::Interval;
            s
        })
    }

    /// A tensor grid of `m` samples per axis on `[0, 1]^dim` with product hats
    /// and a Gaussian kernel.
    pub fn unit_box(dim: usize, m: usize, sigma: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("box dimension must be at least 1"));
        }
        if m < 2 {
            return Err(Error::InvalidParameter("at least two samples per axis are required"));
        }
        let kernel = RangeKernel::gaussian(sigma)?;
        let total = m.checked_pow(dim as u32).ok_or(Error::InvalidParameter("too many box samples"))?;
        let mut samples = Vec::with_capacity(total * dim);
        for flat in 0..total {
            let mut rest = flat;
            for _ in 0..dim {
                samples.push((rest % m) as f64 / (m - 1) as f64);
                rest /= m;
            }
        }
        Ok(Self { manifold: Manifold::Box { dim }, samples, kernel, partition: Partition::Hat { per_axis: m } })
    }

    /// Vertices of the icosahedron subdivided `level` times (12, 42, 162, ...)
    /// with barycentric hats and a Von Mises-Fisher kernel of width `sigma`.
    pub fn sphere_polyhedral(level: usize, sigma: f64) -> Result<Self> {
        Self::from_polyhedron(SphericalPolyhedron::icosphere(level), RangeKernel::von_mises_fisher(sigma)?)
    }

    /// Barycentric hats on an arbitrary spherical polyhedron.
    pub fn from_polyhedron(poly: SphericalPolyhedron, kernel: RangeKernel) -> Result<Self> {
        if poly.vertices().len() < 4 {
            return Err(Error::InvalidParameter("a sphere range space needs at least four samples"));
        }
        let samples = poly.vertices().iter().flat_map(|v| v.iter().copied()).collect();
        Ok(Self { manifold: Manifold::Sphere, samples, kernel, partition: Partition::SphericalHat(poly) })
    }

    /// `m` Fibonacci-spiral samples with normalized Von Mises-Fisher bumps.
    pub fn sphere_vmf(m: usize, sigma: f64) -> Result<Self> {
        Self::sphere_vmf_from_samples(shapes::fibonacci_sphere_points(m), sigma)
    }

    /// Normalized Von Mises-Fisher bumps at the given unit directions. The
    /// bump width is half the mean geodesic distance to the nearest sample.
    pub fn sphere_vmf_from_samples(directions: Vec<Vec3>, sigma: f64) -> Result<Self> {
        if directions.len() < 4 {
            return Err(Error::InvalidParameter("a sphere range space needs at least four samples"));
        }
        let mut samples = Vec::with_capacity(directions.len() * 3);
        for (index, d) in directions.iter().enumerate() {
            let n = norm(*d);
            if (n - 1.0).abs() > 1e-9 {
                return Err(Error::NonUnitVector { index, norm: n });
            }
            samples.extend_from_slice(&normalize(*d).expect("checked unit"));
        }
        let bump_width = 0.5 * mean_nearest_geodesic(&directions);
        if !(bump_width > 0.0) {
            return Err(Error::InvalidParameter("sphere samples must be distinct"));
        }
        Ok(Self {
            manifold: Manifold::Sphere,
            samples,
            kernel: RangeKernel::von_mises_fisher(sigma)?,
            partition: Partition::Meshless { bump_width },
        })
    }

    /// The same samples and partition with a different kernel.
    pub fn with_kernel(&self, kernel: RangeKernel) -> Self {
        Self { kernel, ..self.clone() }
    }

    /// Rotates every sphere sample (and the hat polyhedron) by `r`.
    pub fn rotated(&self, r: &Mat3) -> Result<Self> {
        if self.manifold != Manifold::Sphere {
            return Err(Error::InvalidParameter("only sphere range spaces can be rotated"));
        }
        let mut samples = Vec::with_capacity(self.samples.len());
        for i in 0..self.sample_count() {
            let v = normalize(mat_vec(r, self.sample3(i))).ok_or(Error::InvalidParameter("rotation must be invertible"))?;
            samples.extend_from_slice(&v);
        }
        let partition = match &self.partition {
            Partition::SphericalHat(poly) => Partition::SphericalHat(poly.rotated(r)?),
            other => other.clone(),
        };
        Ok(Self { manifold: self.manifold, samples, kernel: self.kernel, partition })
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn scheme(&self) -> PartitionScheme {
        match self.partition {
            Partition::Hat { .. } => PartitionScheme::Hat,
            Partition::SphericalHat(_) => PartitionScheme::SphericalHat,
            Partition::Meshless { .. } => PartitionScheme::VmfMeshless,
        }
    }

    pub fn kernel(&self) -> &RangeKernel {
        &self.kernel
    }

    /// Coordinates per sample.
    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len() / self.dim()
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.samples[i * d..(i + 1) * d]
    }

    /// Flat sample coordinates, sample-major.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Width of the meshless bumps, if any.
    pub fn bump_width(&self) -> Option<f64> {
        match self.partition {
            Partition::Meshless { bump_width } => Some(bump_width),
            _ => None,
        }
    }

    fn sample3(&self, i: usize) -> Vec3 {
        let s = self.sample(i);
        [s[0], s[1], s[2]]
    }

    /// Writes the nonzero partition weights at `p` into `out` as
    /// `(sample, weight)` pairs in ascending sample order. Returns true when
    /// `p` lay outside a box range and was clamped into it.
    pub fn partition(&self, p: &[f64], out: &mut Vec<(usize, f64)>) -> bool {
        out.clear();
        match &self.partition {
            Partition::Hat { per_axis } => box_hats(*per_axis, p, out),
            Partition::SphericalHat(poly) => {
                let (face, w) = poly.locate([p[0], p[1], p[2]]);
                let f = poly.faces()[face];
                for k in 0..3 {
                    if w[k] > 0.0 {
                        out.push((f[k], w[k]));
                    }
                }
                out.sort_unstable_by_key(|e| e.0);
                false
            }
            Partition::Meshless { bump_width } => {
                let inv = 1.0 / (bump_width * bump_width);
                let q = [p[0], p[1], p[2]];
                let mut total = 0.0;
                for i in 0..self.sample_count() {
                    let b = exp((dot(q, self.sample3(i)) - 1.0) * inv);
                    total += b;
                    out.push((i, b));
                }
                for e in out.iter_mut() {
                    e.1 /= total;
                }
                out.retain(|e| e.1 > 0.0);
                false
            }
        }
    }

    /// Dense vector of all `m` partition weights at `p`.
    pub fn partition_dense(&self, p: &[f64]) -> Vec<f64> {
        let mut sparse = Vec::new();
        self.partition(p, &mut sparse);
        let mut dense = alloc::vec![0.0; self.sample_count()];
        for (i, w) in sparse {
            dense[i] = w;
        }
        dense
    }

    /// `sum_i sampled[i] * phi_i(p)`.
    pub fn reconstruct(&self, sampled: &[f64], p: &[f64]) -> Result<f64> {
        if sampled.len() != self.sample_count() {
            return Err(Error::ShapeMismatch { expected: self.sample_count(), found: sampled.len() });
        }
        if p.len() != self.dim() {
            return Err(Error::ChannelMismatch { expected: self.dim(), found: p.len() });
        }
        let mut weights = Vec::new();
        self.partition(p, &mut weights);
        Ok(weights.iter().map(|&(i, w)| sampled[i] * w).sum())
    }

    /// `w_i`, the integral of each partition function over the manifold.
    /// Closed form for grid hats; a fine icosphere quadrature on the sphere.
    pub fn quadrature_weights(&self) -> Vec<f64> {
        match &self.partition {
            Partition::Hat { per_axis } => {
                let m = *per_axis;
                let h = 1.0 / (m - 1) as f64;
                let axis = |k: usize| if k == 0 || k == m - 1 { 0.5 * h } else { h };
                (0..self.sample_count())
                    .map(|flat| {
                        let mut rest = flat;
                        let mut w = 1.0;
                        for _ in 0..self.dim() {
                            w *= axis(rest % m);
                            rest /= m;
                        }
                        w
                    })
                    .collect()
            }
            _ => {
                let (vertices, faces) = shapes::icosphere_raw(SPHERE_QUADRATURE_LEVEL);
                let mut weights = alloc::vec![0.0; self.sample_count()];
                let mut buf = Vec::new();
                for f in &faces {
                    let [a, b, c] = [vertices[f[0]], vertices[f[1]], vertices[f[2]]];
                    let omega = solid_angle(a, b, c);
                    let mid = normalize([a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]])
                        .expect("icosphere faces do not contain the origin");
                    self.partition(&mid, &mut buf);
                    for &(i, w) in &buf {
                        weights[i] += w * omega;
                    }
                }
                weights
            }
        }
    }
}

fn box_hats(m: usize, p: &[f64], out: &mut Vec<(usize, f64)>) -> bool {
    let mut clamped = false;
    out.push((0, 1.0));
    let mut stride = 1;
    let mut next = Vec::with_capacity(2 * out.len());
    for &x in p {
        let xc = x.clamp(0.0, 1.0);
        clamped |= xc != x;
        let t = xc * (m - 1) as f64;
        let lo = (t as usize).min(m - 2);
        let frac = t - lo as f64;
        next.clear();
        for &(i, w) in out.iter() {
            if 1.0 - frac > 0.0 {
                next.push((i + lo * stride, w * (1.0 - frac)));
            }
            if frac > 0.0 {
                next.push((i + (lo + 1) * stride, w * frac));
            }
        }
        core::mem::swap(out, &mut next);
        stride *= m;
    }
    out.sort_unstable_by_key(|e| e.0);
    clamped
}

/// Solid angle of the spherical triangle spanned by unit vectors `a, b, c`.
fn solid_angle(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let triple = dot(a, crate::math::cross(b, c)).abs();
    let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * crate::math::atan2(triple, denom)
}

fn mean_nearest_geodesic(points: &[Vec3]) -> f64 {
    let mut total = 0.0;
    for (i, &p) in points.iter().enumerate() {
        let mut best = f64::INFINITY;
        for (j, &q) in points.iter().enumerate() {
            if i != j {
                best = best.min(acos(dot(p, q).clamp(-1.0, 1.0)));
            }
        }
        total += best;
    }
    total / points.len() as f64
}
