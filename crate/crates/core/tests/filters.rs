//! Filter behavior on constructed instances, checked against dense oracles
//! and known ground truth.

use genshift_core::diffusion::{
    build_cotan_laplacian, build_face_dual_laplacian, build_grid_blur, build_knn_graph_laplacian, heat_step, Blur,
    MassMatrix,
};
use genshift_core::filters::{
    exact_bilateral_oracle, generalized_bilateral, local_histograms, mean_shift_euclidean, mean_shift_euclidean_from,
    mean_shift_spherical, mean_shift_spherical_from, substitute_kernel_unsharp, DenseKernel, FilterParams, GridGaussianKernel,
};
use genshift_core::geom::vertex_normals;
use genshift_core::math::{angle_between, norm, normalize, rotation, sub, Vec3};
use genshift_core::pipeline::{add_vertex_noise, diffusion_time, face_diffusion, filter_normals_with, DenoiseConfig};
use genshift_core::range::{RangeKernel, RangeSpace};
use genshift_core::rng::Rng;
use genshift_core::{shapes, ElementKind, GridDomain, OrientedPointCloud, Signal, TriangleMesh};

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn span(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// A smooth step across `x = 0` plus Gaussian noise, kept in `[0, 1]`.
fn step_signal(kind: ElementKind, coords: &[f64], seed: u64) -> Signal {
    let mut rng = Rng::new(seed);
    let values = coords.iter().map(|x| (0.5 + 0.4 * (x / 0.1).tanh() + 0.05 * rng.normal()).clamp(0.0, 1.0)).collect();
    Signal::scalar(kind, values).unwrap()
}

fn vertex_heat(mesh: &TriangleMesh, sigma_s: f64) -> genshift_core::diffusion::DiffusionOperator {
    let d = build_cotan_laplacian(mesh);
    heat_step(&d.laplacian, &d.mass, diffusion_time(sigma_s, mesh.mean_edge_length())).unwrap()
}

fn check_oracle(name: &str, f: &Signal, blur: &dyn Blur, mass: &MassMatrix, sigma_r: f64) {
    let range = RangeSpace::interval(20, sigma_r).unwrap();
    let fast = generalized_bilateral(f, f, &FilterParams::new(&range, blur)).unwrap();
    let kernel = DenseKernel::from_blur(blur, Some(mass)).unwrap();
    let exact = exact_bilateral_oracle(f, f, &kernel, mass.diagonal(), range.kernel()).unwrap();
    let err = max_abs_diff(fast.signal.values(), exact.values());
    assert!(err <= 0.01 * span(f.values()), "{name}: error {err}");
}

#[test]
fn approximation_matches_oracle_on_every_domain() {
    // Pixel grid, with the Gaussian stencil as the spatial kernel.
    let (grid, image) = shapes::test_image(20, 20, 0.05, 3);
    let blur = build_grid_blur(grid, 2.0).unwrap();
    let range = RangeSpace::interval(20, 0.15).unwrap();
    let fast = generalized_bilateral(&image, &image, &FilterParams::new(&range, &blur)).unwrap();
    let exact =
        exact_bilateral_oracle(&image, &image, &GridGaussianKernel::new(&blur), &vec![1.0; grid.len()], range.kernel())
            .unwrap();
    let err = max_abs_diff(fast.signal.values(), exact.values());
    assert!(err <= 0.01 * span(image.values()), "grid: error {err}");

    // Mesh vertices under the cotangent heat step.
    let sphere = shapes::icosphere(2, 1.0);
    let z: Vec<f64> = sphere.positions().iter().map(|p| p[2]).collect();
    let f = step_signal(ElementKind::Vertex, &z, 11);
    let d = build_cotan_laplacian(&sphere);
    let t = heat_step(&d.laplacian, &d.mass, diffusion_time(2.0, sphere.mean_edge_length())).unwrap();
    check_oracle("vertices", &f, &t, &d.mass, 0.15);

    // Mesh faces under the dual-graph heat step.
    let cube = shapes::subdivided_cube(4);
    let x: Vec<f64> = (0..cube.face_count()).map(|i| cube.face_centroid(i)[0] - 0.5).collect();
    let f = step_signal(ElementKind::Face, &x, 12);
    let d = build_face_dual_laplacian(&cube).unwrap();
    let t = face_diffusion(&cube, 2.0, 1).unwrap();
    check_oracle("faces", &f, &t, &d.mass, 0.15);

    // Point cloud under the kNN graph heat step.
    let points = shapes::fibonacci_sphere_points(300);
    let cloud = OrientedPointCloud::new(points.clone(), points.clone()).unwrap();
    let z: Vec<f64> = points.iter().map(|p| p[2]).collect();
    let f = step_signal(ElementKind::Point, &z, 13);
    let d = build_knn_graph_laplacian(&cloud, 10, 0.04).unwrap().discretization;
    let t = heat_step(&d.laplacian, &d.mass, diffusion_time(2.0, 1.0)).unwrap();
    check_oracle("points", &f, &t, &d.mass, 0.15);
}

/// Two hemispheres at 0.2 and 0.8 plus noise of std 0.05.
fn bimodal(level: usize, seed: u64) -> (TriangleMesh, Signal) {
    let mesh = shapes::icosphere(level, 1.0);
    let mut rng = Rng::new(seed);
    let values = mesh.positions().iter().map(|p| if p[2] < 0.0 { 0.2 } else { 0.8 } + 0.05 * rng.normal()).collect();
    (mesh, Signal::scalar(ElementKind::Vertex, values).unwrap())
}

/// Rotates each unit vector by a uniform angle up to `max_deg` about a
/// random perpendicular axis.
fn tilt(normals: &[Vec3], max_deg: f64, seed: u64) -> Vec<Vec3> {
    let mut rng = Rng::new(seed);
    normals
        .iter()
        .map(|&n| {
            let u = rng.unit_vector();
            let axis = genshift_core::math::cross(n, u);
            let angle = rng.uniform() * max_deg.to_radians();
            genshift_core::math::mat_vec(&rotation(axis, angle), n)
        })
        .collect()
}

/// Two 15 x 15 sheets 0.5 apart with opposite normals, jittered by `noise`.
fn two_sheets(noise: f64, seed: u64) -> OrientedPointCloud {
    let mut rng = Rng::new(seed);
    let (mut points, mut normals) = (Vec::new(), Vec::new());
    for (z, nz) in [(0.0, 1.0), (0.5, -1.0)] {
        for i in 0..15 {
            for j in 0..15 {
                points.push([i as f64 * 0.1, j as f64 * 0.1, z]);
                let v = [noise * rng.normal(), noise * rng.normal(), nz + noise * rng.normal()];
                normals.push(normalize(v).unwrap());
            }
        }
    }
    OrientedPointCloud::new(points, normals).unwrap()
}

#[test]
fn mean_shift_changes_stabilize() {
    let mut histories: Vec<Vec<f64>> = Vec::new();

    for seed in [1, 2, 3] {
        let (mesh, f) = bimodal(3, seed);
        let t = vertex_heat(&mesh, 2.0);
        for sigma_r in [0.1, 0.15, 0.2] {
            let range = RangeSpace::interval(20, sigma_r).unwrap();
            histories.push(mean_shift_euclidean(&f, &FilterParams::new(&range, &t)).unwrap().changes);
        }
    }

    let (grid, image) = shapes::test_image(48, 48, 0.05, 5);
    let blur = build_grid_blur(grid, 3.0).unwrap();
    let range = RangeSpace::interval(20, 0.1).unwrap();
    histories.push(mean_shift_euclidean(&image, &FilterParams::new(&range, &blur)).unwrap().changes);

    for seed in [4, 5] {
        let cube = shapes::subdivided_cube(8);
        let clean = cube.face_normals().to_vec3s();
        let noisy = Signal::from_vectors(ElementKind::Face, &tilt(&clean, 20.0, seed)).unwrap();
        let t = face_diffusion(&cube, 4.0, 1).unwrap();
        let range = RangeSpace::sphere_polyhedral(1, 0.15).unwrap();
        histories.push(mean_shift_spherical(&noisy, &FilterParams::new(&range, &t)).unwrap().changes);
    }

    let cfg = DenoiseConfig { sigma_s: 8.0, sigma_r: 0.1, tolerance: 1e-4, ..DenoiseConfig::default() };
    let noisy = add_vertex_noise(&shapes::subdivided_cube(12), 0.2, 1).unwrap();
    let t = face_diffusion(&noisy, 8.0, 1).unwrap();
    histories.push(filter_normals_with(&noisy.face_normals(), &t, &cfg).unwrap().changes);

    let cloud = two_sheets(0.2, 4);
    let d = build_knn_graph_laplacian(&cloud, 10, 0.01).unwrap().discretization;
    let t = heat_step(&d.laplacian, &d.mass, diffusion_time(2.0, 1.0)).unwrap();
    let cfg = DenoiseConfig { sigma_s: 2.0, ..cfg };
    histories.push(filter_normals_with(&cloud.normal_signal(), &t, &cfg).unwrap().changes);

    let (mut steps, mut non_increasing) = (0, 0);
    for changes in &histories {
        for pair in changes.windows(2).skip(1) {
            steps += 1;
            non_increasing += usize::from(pair[1] <= pair[0]);
        }
    }
    assert!(steps > 0);
    let share = non_increasing as f64 / steps as f64;
    assert!(share >= 0.95, "{non_increasing} of {steps} steps non-increasing");
}

#[test]
fn bimodal_mean_shift_reaches_local_histogram_modes() {
    let (mesh, f) = bimodal(2, 42);
    let t = vertex_heat(&mesh, 2.0);
    let range = RangeSpace::interval(20, 0.1).unwrap();
    let out = mean_shift_euclidean(&f, &FilterParams::new(&range, &t)).unwrap();
    assert!(out.converged);
    assert!(out.iterations <= 20, "{} iterations", out.iterations);

    // Dense scan of the local density h(p; x) = sum_y K(x, y) A_y K_r(p, f(y)),
    // then a hill climb from f(x) on the 1001-point grid.
    let d = build_cotan_laplacian(&mesh);
    let k = DenseKernel::from_blur(&t, Some(&d.mass)).unwrap();
    let n = mesh.vertex_count();
    let mass = d.mass.diagonal();
    let kern = |a: f64, b: f64| (-(a - b) * (a - b) / (2.0 * 0.1 * 0.1)).exp();
    for x in 0..n {
        let density = |p: f64| (0..n).map(|y| k.values()[x * n + y] * mass[y] * kern(p, f.values()[y])).sum::<f64>();
        let mut i = (f.values()[x].clamp(0.0, 1.0) * 1000.0).round() as usize;
        let mut here = density(i as f64 / 1000.0);
        loop {
            let up = if i < 1000 { density((i + 1) as f64 / 1000.0) } else { f64::NEG_INFINITY };
            let down = if i > 0 { density((i - 1) as f64 / 1000.0) } else { f64::NEG_INFINITY };
            if up > here && up >= down {
                i += 1;
                here = up;
            } else if down > here {
                i -= 1;
                here = down;
            } else {
                break;
            }
        }
        let mode = i as f64 / 1000.0;
        let got = out.signal.values()[x];
        assert!((got - mode).abs() <= 0.02, "element {x}: {got} vs density mode {mode}");
    }
}

#[test]
fn converged_mean_shift_resumes_in_one_iteration() {
    let (mesh, f) = bimodal(3, 9);
    let t = vertex_heat(&mesh, 2.0);
    let range = RangeSpace::interval(20, 0.1).unwrap();
    let params = FilterParams::new(&range, &t);
    let first = mean_shift_euclidean(&f, &params).unwrap();
    assert!(first.converged);
    // Same density, iterated from its own converged output.
    let again = mean_shift_euclidean_from(&f, &first.signal, &params).unwrap();
    assert!(again.iterations <= 1, "{} iterations, changes {:?}", again.iterations, again.changes);

    let cube = shapes::subdivided_cube(8);
    let noisy = Signal::from_vectors(ElementKind::Face, &tilt(&cube.face_normals().to_vec3s(), 20.0, 6)).unwrap();
    let t = face_diffusion(&cube, 4.0, 1).unwrap();
    let range = RangeSpace::sphere_polyhedral(1, 0.15).unwrap();
    let params = FilterParams::new(&range, &t);
    let first = mean_shift_spherical(&noisy, &params).unwrap();
    assert!(first.converged);
    let again = mean_shift_spherical_from(&noisy, &first.signal, &params).unwrap();
    assert!(again.iterations <= 1, "{} iterations, changes {:?}", again.iterations, again.changes);
}

#[test]
fn histogram_mode_matches_dense_argmax() {
    let grid = GridDomain::new(10, 10).unwrap();
    let mut rng = Rng::new(21);
    let values: Vec<f64> = (0..grid.len())
        .map(|i| if (i % 10) < 5 { 0.3 } else { 0.7 } + 0.08 * rng.normal())
        .map(|v: f64| v.clamp(0.0, 1.0))
        .collect();
    let f = Signal::scalar(ElementKind::Pixel, values.clone()).unwrap();
    let blur = build_grid_blur(grid, 1.5).unwrap();
    let m = 21;
    let range = RangeSpace::interval(m, 0.1).unwrap();
    let hist = local_histograms(&f, &FilterParams::new(&range, &blur)).unwrap();
    let spatial = GridGaussianKernel::new(&blur);
    let kern = |a: f64, b: f64| (-(a - b) * (a - b) / (2.0 * 0.1 * 0.1)).exp();
    let spacing = 1.0 / (m - 1) as f64;
    use genshift_core::filters::SpatialKernel;
    for x in 0..grid.len() {
        let density = |p: f64| (0..grid.len()).map(|y| spatial.weight(x, y) * kern(p, values[y])).sum::<f64>();
        let best = (0..=1000).map(|i| i as f64 / 1000.0).max_by(|a, b| density(*a).total_cmp(&density(*b))).unwrap();
        let bin = hist.sample(hist.mode(x))[0];
        assert!((bin - best).abs() <= spacing, "element {x}: bin {bin} vs argmax {best}");
    }
}

#[test]
fn cube_face_histograms_concentrate_on_own_normal() {
    let cube = shapes::subdivided_cube(16);
    let normals = cube.face_normals();
    let sigma_s = 1.5;
    let t = face_diffusion(&cube, sigma_s, 1).unwrap();
    let range = RangeSpace::sphere_polyhedral(1, 0.1).unwrap();
    let hist = local_histograms(&normals, &FilterParams::new(&range, &t)).unwrap();
    let (vertices, faces) = shapes::icosphere_raw(1);
    let spacing = faces
        .iter()
        .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
        .map(|(a, b)| angle_between(vertices[a], vertices[b]))
        .fold(0.0, f64::max);
    let margin = 3.0 * sigma_s * cube.mean_edge_length();
    let mut checked = 0;
    for face in 0..cube.face_count() {
        let c = cube.face_centroid(face);
        // The cube spans [-0.5, 0.5]^3; a face lies on one bounding plane and
        // its distance to the nearest edge is the smaller of the other two gaps.
        let mut gaps: Vec<f64> = c.iter().map(|v| 0.5 - v.abs()).collect();
        gaps.sort_by(f64::total_cmp);
        if gaps[1] < margin {
            continue;
        }
        checked += 1;
        // The bins nearest the normal: samples within one sample spacing.
        let own = normals.vec3(face);
        let mass: f64 = (0..hist.sample_count())
            .filter(|&i| {
                let p = hist.sample(i);
                angle_between([p[0], p[1], p[2]], own) <= spacing + 1e-9
            })
            .map(|i| hist.row(face)[i])
            .sum();
        assert!(mass >= 0.9, "face {face}: {mass} in the nearest bins");
    }
    assert!(checked > 0);
}

#[test]
fn enhancement_stays_on_its_side_of_a_crease() {
    let mesh = shapes::wedge(8);
    let h = 1.0 / 8.0;
    let t = vertex_heat(&mesh, 1.5);
    let unsharp = substitute_kernel_unsharp(&t, 1.0).unwrap();
    let range = RangeSpace::sphere_polyhedral(1, 0.3).unwrap().with_kernel(RangeKernel::gaussian(0.3).unwrap());
    let guide = vertex_normals(&mesh);
    let params = FilterParams::new(&range, &unsharp);

    // Displacement field x - T(x), then a random kick on one flank only.
    let x = mesh.position_signal();
    let smooth = t.apply(&x).unwrap();
    let delta: Vec<f64> = x.values().iter().zip(smooth.values()).map(|(a, b)| a - b).collect();
    let mut rng = Rng::new(17);
    let mut kicked = delta.clone();
    let mut kick = 0.0f64;
    for (v, p) in mesh.positions().iter().enumerate() {
        if p[0] < -1.5 * h {
            for c in 0..3 {
                let e = 0.01 * rng.normal();
                kicked[3 * v + c] += e;
                kick = kick.max(e.abs());
            }
        }
    }
    let base = generalized_bilateral(&Signal::new(ElementKind::Vertex, 3, delta).unwrap(), &guide, &params).unwrap();
    let moved = generalized_bilateral(&Signal::new(ElementKind::Vertex, 3, kicked).unwrap(), &guide, &params).unwrap();
    let mut influence = 0.0f64;
    for (v, p) in mesh.positions().iter().enumerate() {
        if p[0] > 1.5 * h {
            let d = norm(sub(moved.signal.vec3(v), base.signal.vec3(v)));
            influence = influence.max(d / kick);
        }
    }
    assert!(influence < 1e-3, "cross-crease influence {influence}");
}

#[test]
fn enhancement_grows_with_gain() {
    let mesh = add_vertex_noise(&shapes::wedge(8), 0.0, 0).unwrap();
    let mut last = None;
    for gain in [0.0, 0.5, 1.0, 2.0] {
        let cfg = genshift_core::pipeline::EnhanceConfig { gain, ..Default::default() };
        let out = genshift_core::pipeline::enhance(&mesh, &cfg).unwrap();
        assert_eq!(out.mesh.faces(), mesh.faces());
        if gain == 0.0 {
            let moved = mesh.positions().iter().zip(out.mesh.positions()).map(|(a, b)| norm(sub(*a, *b))).fold(0.0, f64::max);
            assert!(moved <= 1e-9, "zero gain moved a vertex by {moved}");
        }
        if let Some(prev) = last {
            assert!(out.enhanced_displacement > prev, "gain {gain}: {} <= {prev}", out.enhanced_displacement);
        }
        last = Some(out.enhanced_displacement);
    }
}

