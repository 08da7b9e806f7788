//! End-to-end pipelines: mesh denoising through face-normal filtering and
//! vertex reconstruction, point-cloud normal cleanup, scalar filtering on
//! meshes and curvature-driven feature enhancement.

use alloc::vec::Vec;

use crate::diffusion::{
    build_cotan_laplacian, build_face_dual_laplacian, build_knn_graph_laplacian, heat_step_multi, Blur, DiffusionOperator,
};
use crate::error::{Error, Result};
use crate::exec::map_ordered;
use crate::filters::{
    generalized_bilateral, mean_shift_euclidean, mean_shift_spherical, substitute_kernel_unsharp, FilterParams,
    DEFAULT_MAX_ITERATIONS, DEFAULT_SPHERE_TOLERANCE, DEFAULT_TOLERANCE,
};
use crate::geom::{vertex_normals, ElementKind, OrientedPointCloud, Signal, TriangleMesh};
use crate::math::{add, dot, normalize, scale, sqrt, sub, Vec3};
use crate::range::{RangeKernel, RangeSpace};
use crate::rng::Rng;

/// How the filtered field is obtained from the per-sample blurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    /// One cross-bilateral pass.
    Bilateral,
    /// Mean shift iterated to a fixed point.
    MeanShift,
}

/// Partition of unity used on the sphere of normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpherePartition {
    /// Barycentric hats on an icosahedron subdivided `level` times.
    Hat { level: usize },
    /// Normalized bumps at `samples` Fibonacci directions.
    Meshless { samples: usize },
}

/// Settings for filtering a field of unit normals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenoiseConfig {
    /// Spatial width in mean edge lengths; the heat step runs for `sigma_s^2 l^2 / 2`.
    pub sigma_s: f64,
    /// Von Mises-Fisher width on the sphere of normals.
    pub sigma_r: f64,
    pub partition: SpherePartition,
    pub mode: FilterMode,
    pub max_iterations: usize,
    /// Mean-shift stopping angle in radians.
    pub tolerance: f64,
    /// Jacobi iterations of vertex reconstruction.
    pub recon_iterations: usize,
    /// Implicit substeps per blur.
    pub time_steps: usize,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self {
            sigma_s: 2.0,
            sigma_r: 0.1,
            partition: SpherePartition::Hat { level: 1 },
            mode: FilterMode::MeanShift,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerance: DEFAULT_SPHERE_TOLERANCE,
            recon_iterations: 20,
            time_steps: 1,
        }
    }
}

impl DenoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_s > 0.0) || !(self.sigma_r > 0.0) {
            return Err(Error::InvalidParameter("widths must be positive"));
        }
        if self.recon_iterations == 0 || self.max_iterations == 0 || self.time_steps == 0 {
            return Err(Error::InvalidParameter("iteration counts must be >= 1"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        Ok(())
    }

    /// The sphere range space described by this configuration.
    pub fn range_space(&self) -> Result<RangeSpace> {
        match self.partition {
            SpherePartition::Hat { level } => RangeSpace::sphere_polyhedral(level, self.sigma_r),
            SpherePartition::Meshless { samples } => RangeSpace::sphere_vmf(samples, self.sigma_r),
        }
    }
}

/// Diffusion time for a spatial width given in mean edge lengths.
pub fn diffusion_time(sigma_s: f64, edge_length: f64) -> f64 {
    0.5 * sigma_s * sigma_s * edge_length * edge_length
}

/// Displaces every vertex coordinate by an independent uniform draw from
/// `[-a l, a l]`, `l` the mean edge length.
pub fn add_vertex_noise(mesh: &TriangleMesh, amplitude: f64, seed: u64) -> Result<TriangleMesh> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidParameter("noise amplitude must be nonnegative"));
    }
    if amplitude == 0.0 {
        return Ok(mesh.clone());
    }
    let half = amplitude * mesh.mean_edge_length();
    let mut rng = Rng::new(seed);
    let positions = mesh
        .positions()
        .iter()
        .map(|p| {
            let mut q = *p;
            for c in q.iter_mut() {
                *c += rng.uniform_range(-half, half);
            }
            q
        })
        .collect();
    mesh.with_positions(positions)
}

/// The face-domain blur for a spatial width in mean edge lengths.
pub fn face_diffusion(mesh: &TriangleMesh, sigma_s: f64, steps: usize) -> Result<DiffusionOperator> {
    let d = build_face_dual_laplacian(mesh)?;
    heat_step_multi(&d.laplacian, &d.mass, diffusion_time(sigma_s, mesh.mean_edge_length()), steps)
}

/// A filtered normal field with iteration statistics.
#[derive(Debug, Clone)]
pub struct NormalFilterOutput {
    pub normals: Signal,
    /// Mean-shift iterations (1 for a bilateral pass).
    pub iterations: usize,
    pub converged: bool,
    pub changes: Vec<f64>,
    pub fallback_count: usize,
    pub degenerate_count: usize,
}

/// Filters a unit vector field with the given blur, guided by itself.
pub fn filter_normals_with(normals: &Signal, blur: &dyn Blur, cfg: &DenoiseConfig) -> Result<NormalFilterOutput> {
    cfg.validate()?;
    let rs = cfg.range_space()?;
    let params = FilterParams::new(&rs, blur).with_max_iterations(cfg.max_iterations).with_tolerance(cfg.tolerance);
    match cfg.mode {
        FilterMode::Bilateral => {
            let out = generalized_bilateral(normals, normals, &params)?;
            // Averages of unit vectors are shorter than one; project back.
            let mut degenerate = 0;
            let unit: Vec<Vec3> = (0..normals.len())
                .map(|x| {
                    normalize(out.signal.vec3(x)).unwrap_or_else(|| {
                        degenerate += 1;
                        normals.vec3(x)
                    })
                })
                .collect();
            Ok(NormalFilterOutput {
                normals: Signal::from_vectors(normals.kind(), &unit)?,
                iterations: 1,
                converged: true,
                changes: Vec::new(),
                fallback_count: out.fallback_count,
                degenerate_count: degenerate,
            })
        }
        FilterMode::MeanShift => {
            let out = mean_shift_spherical(normals, &params)?;
            Ok(NormalFilterOutput {
                normals: out.signal,
                iterations: out.iterations,
                converged: out.converged,
                changes: out.changes,
                fallback_count: out.fallback_count,
                degenerate_count: out.degenerate_count,
            })
        }
    }
}

/// Filters the face normals of `mesh`, blurring with the face dual Laplacian.
pub fn denoise_normals(mesh: &TriangleMesh, cfg: &DenoiseConfig) -> Result<NormalFilterOutput> {
    cfg.validate()?;
    let t = face_diffusion(mesh, cfg.sigma_s, cfg.time_steps)?;
    filter_normals_with(&mesh.face_normals(), &t, cfg)
}

/// Moves vertices so face normals approach `target`. Each Jacobi iteration
/// sets `x_v += (1/|F_v|) sum_f n_f (n_f . (c_f - x_v))` over incident faces,
/// with centroids `c_f` from the previous iterate. Connectivity is kept.
pub fn reconstruct_vertices(mesh: &TriangleMesh, target: &Signal, iterations: usize) -> Result<TriangleMesh> {
    if target.kind() != ElementKind::Face || target.channels() != 3 {
        return Err(Error::InvalidParameter("target normals must be a face signal of 3-vectors"));
    }
    target.check_len(mesh.face_count())?;
    target.check_unit(RangeKernel::UNIT_TOLERANCE)?;
    let normals = target.to_vec3s();
    let faces = mesh.faces();
    let mut positions = mesh.positions().to_vec();
    for _ in 0..iterations {
        let centroids: Vec<Vec3> = faces
            .iter()
            .map(|f| scale(add(add(positions[f[0]], positions[f[1]]), positions[f[2]]), 1.0 / 3.0))
            .collect();
        let current = &positions;
        positions = map_ordered(current.len(), |v| {
            let incident = mesh.vertex_faces(v);
            let x = current[v];
            let mut step = [0.0; 3];
            for &f in incident {
                let n = normals[f];
                step = add(step, scale(n, dot(n, sub(centroids[f], x))));
            }
            add(x, scale(step, 1.0 / incident.len() as f64))
        });
    }
    mesh.with_positions(positions)
}

/// Root mean squared distance between corresponding vertices.
pub fn vertex_rmse(a: &TriangleMesh, b: &TriangleMesh) -> Result<f64> {
    if a.vertex_count() != b.vertex_count() || a.faces() != b.faces() {
        return Err(Error::ConnectivityMismatch);
    }
    let sum: f64 = a.positions().iter().zip(b.positions()).map(|(p, q)| crate::math::dist2(*p, *q)).sum();
    Ok(sqrt(sum / a.vertex_count() as f64))
}

/// Result of the full denoising pipeline.
#[derive(Debug, Clone)]
pub struct DenoiseOutput {
    pub mesh: TriangleMesh,
    pub normals: NormalFilterOutput,
}

/// Normal filtering followed by vertex reconstruction.
pub fn denoise_mesh(mesh: &TriangleMesh, cfg: &DenoiseConfig) -> Result<DenoiseOutput> {
    let normals = denoise_normals(mesh, cfg)?;
    let out = reconstruct_vertices(mesh, &normals.normals, cfg.recon_iterations)?;
    Ok(DenoiseOutput { mesh: out, normals })
}

/// Filters the normals of a point cloud over its kNN graph. The graph has
/// unit mass, so the heat step runs for `sigma_s^2 / 2`. Positions are kept.
pub fn filter_cloud_normals(
    cloud: &OrientedPointCloud,
    cfg: &DenoiseConfig,
    k: usize,
    t: f64,
) -> Result<(OrientedPointCloud, NormalFilterOutput)> {
    cfg.validate()?;
    let graph = build_knn_graph_laplacian(cloud, k, t)?;
    let d = graph.discretization;
    let op = heat_step_multi(&d.laplacian, &d.mass, diffusion_time(cfg.sigma_s, 1.0), cfg.time_steps)?;
    let out = filter_normals_with(&cloud.normal_signal(), &op, cfg)?;
    let filtered = cloud.with_normals(out.normals.to_vec3s())?;
    Ok((filtered, out))
}

/// What guides the range weights of a scalar filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarGuide {
    /// The scalar itself.
    SelfGuided,
    /// Vertex normals.
    Normals,
}

/// Scalar filters on mesh vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    /// Plain heat-step blur.
    Blur,
    Bilateral,
    MeanShift,
}

/// Settings for filtering a per-vertex scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarConfig {
    /// Spatial width in mean edge lengths.
    pub sigma_s: f64,
    /// Range width: a fraction of the signal's span when self-guided,
    /// a Von Mises-Fisher width when guided by normals.
    pub sigma_r: f64,
    /// Interval samples when self-guided.
    pub samples: usize,
    /// Icosphere level of the normal samples when guided by normals.
    pub level: usize,
    pub mode: ScalarMode,
    pub guide: ScalarGuide,
    pub max_iterations: usize,
    /// Mean-shift tolerance, as a fraction of the signal's span.
    pub tolerance: f64,
}

impl Default for ScalarConfig {
    fn default() -> Self {
        Self {
            sigma_s: 2.0,
            sigma_r: 0.1,
            samples: 20,
            level: 1,
            mode: ScalarMode::Bilateral,
            guide: ScalarGuide::SelfGuided,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// A filtered scalar with mean-shift statistics when applicable.
#[derive(Debug, Clone)]
pub struct ScalarOutput {
    pub signal: Signal,
    pub iterations: usize,
    pub converged: bool,
    /// Largest change per iteration, in signal units.
    pub changes: Vec<f64>,
    pub fallback_count: usize,
}

/// Filters a per-vertex scalar on `mesh` with the cotangent heat step.
///
/// Self-guided filters map the signal affinely onto `[0, 1]` using its
/// minimum and maximum, filter there, and map back.
pub fn filter_vertex_scalar(mesh: &TriangleMesh, values: &Signal, cfg: &ScalarConfig) -> Result<ScalarOutput> {
    if values.channels() != 1 {
        return Err(Error::ChannelMismatch { expected: 1, found: values.channels() });
    }
    values.check_len(mesh.vertex_count())?;
    if !(cfg.sigma_s > 0.0) || !(cfg.sigma_r > 0.0) {
        return Err(Error::InvalidParameter("widths must be positive"));
    }
    let d = build_cotan_laplacian(mesh);
    let t = heat_step_multi(&d.laplacian, &d.mass, diffusion_time(cfg.sigma_s, mesh.mean_edge_length()), 1)?;
    let plain = |signal: Signal| ScalarOutput { signal, iterations: 0, converged: true, changes: Vec::new(), fallback_count: 0 };
    let values = Signal::scalar(ElementKind::Vertex, values.values().to_vec())?;
    match (cfg.mode, cfg.guide) {
        (ScalarMode::Blur, _) => Ok(plain(t.apply(&values)?)),
        (ScalarMode::Bilateral, ScalarGuide::Normals) => {
            let rs = RangeSpace::sphere_polyhedral(cfg.level, cfg.sigma_r)?;
            let out = generalized_bilateral(&values, &vertex_normals(mesh), &FilterParams::new(&rs, &t))?;
            Ok(ScalarOutput { fallback_count: out.fallback_count, ..plain(out.signal) })
        }
        (ScalarMode::MeanShift, ScalarGuide::Normals) => {
            Err(Error::InvalidParameter("mean shift is guided by the signal itself"))
        }
        (mode, ScalarGuide::SelfGuided) => {
            let lo = values.values().iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = if hi > lo { hi - lo } else { 1.0 };
            let unit = Signal::scalar(ElementKind::Vertex, values.values().iter().map(|v| (v - lo) / span).collect())?;
            let rs = RangeSpace::interval(cfg.samples, cfg.sigma_r)?;
            let params = FilterParams::new(&rs, &t).with_max_iterations(cfg.max_iterations).with_tolerance(cfg.tolerance);
            let back = |s: Signal| Signal::scalar(ElementKind::Vertex, s.values().iter().map(|v| lo + v * span).collect());
            if mode == ScalarMode::Bilateral {
                let out = generalized_bilateral(&unit, &unit, &params)?;
                Ok(ScalarOutput { fallback_count: out.fallback_count, ..plain(back(out.signal)?) })
            } else {
                let out = mean_shift_euclidean(&unit, &params)?;
                Ok(ScalarOutput {
                    signal: back(out.signal)?,
                    iterations: out.iterations,
                    converged: out.converged,
                    changes: out.changes.iter().map(|c| c * span).collect(),
                    fallback_count: out.fallback_count,
                })
            }
        }
    }
}

/// Settings for feature enhancement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhanceConfig {
    /// Spatial width in mean edge lengths.
    pub sigma_s: f64,
    /// Gaussian width on the sphere of vertex normals.
    pub sigma_r: f64,
    /// Icosphere level of the normal samples.
    pub level: usize,
    /// Unsharp gain.
    pub gain: f64,
}

impl Default for EnhanceConfig {
    fn default() -> Self {
        Self { sigma_s: 1.5, sigma_r: 0.3, level: 1, gain: 1.0 }
    }
}

/// Enhanced mesh with mean displacement magnitudes before and after.
#[derive(Debug, Clone)]
pub struct EnhanceOutput {
    pub mesh: TriangleMesh,
    /// Mean `|x - T(x)|` over vertices.
    pub base_displacement: f64,
    /// Mean magnitude of the filtered displacement.
    pub enhanced_displacement: f64,
}

/// Exaggerates curvature: the displacement `x - T(x)` (a mean curvature
/// normal) is cross-bilaterally filtered with an unsharp spatial kernel and
/// a Gaussian range kernel on vertex normals, then swapped in for the
/// original displacement.
pub fn enhance(mesh: &TriangleMesh, cfg: &EnhanceConfig) -> Result<EnhanceOutput> {
    if !(cfg.sigma_s > 0.0) || !(cfg.sigma_r > 0.0) {
        return Err(Error::InvalidParameter("widths must be positive"));
    }
    let d = build_cotan_laplacian(mesh);
    let t = heat_step_multi(&d.laplacian, &d.mass, diffusion_time(cfg.sigma_s, mesh.mean_edge_length()), 1)?;
    let x = mesh.position_signal();
    let smooth = t.apply(&x)?;
    let delta_values: Vec<f64> = x.values().iter().zip(smooth.values()).map(|(a, b)| a - b).collect();
    let delta = Signal::new(ElementKind::Vertex, 3, delta_values)?;
    let unsharp = substitute_kernel_unsharp(&t, cfg.gain)?;
    let rs = RangeSpace::sphere_polyhedral(cfg.level, cfg.sigma_r)?.with_kernel(RangeKernel::gaussian(cfg.sigma_r)?);
    let out = generalized_bilateral(&delta, &vertex_normals(mesh), &FilterParams::new(&rs, &unsharp))?;
    let n = mesh.vertex_count();
    let mut positions = Vec::with_capacity(n);
    let (mut base, mut enhanced) = (0.0, 0.0);
    for v in 0..n {
        let old = delta.vec3(v);
        let new = out.signal.vec3(v);
        base += crate::math::norm(old);
        enhanced += crate::math::norm(new);
        positions.push(add(mesh.positions()[v], sub(new, old)));
    }
    Ok(EnhanceOutput {
        mesh: mesh.with_positions(positions)?,
        base_displacement: base / n as f64,
        enhanced_displacement: enhanced / n as f64,
    })
}
