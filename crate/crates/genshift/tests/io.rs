//! File formats through real files: round trips, atomic writes and the
//! histogram table layout.

use std::fs;

use genshift::io::{
    histograms_to_string, obj_to_string, parse_obj, pnm_to_bytes, read_obj, read_ply, read_pnm, read_signal_csv,
    read_xyzn, write_atomic, write_histograms_csv, write_obj, write_ply, write_pnm, write_signal_csv, write_xyzn,
    Image, IoError, PnmEncoding,
};
use genshift_core::filters::{local_histograms, FilterParams};
use genshift_core::pipeline::{add_vertex_noise, face_diffusion};
use genshift_core::range::RangeSpace;
use genshift_core::{shapes, ElementKind, GridDomain, OrientedPointCloud, Signal, TriangleMesh};
use proptest::prelude::*;

fn max_position_error(a: &TriangleMesh, b: &TriangleMesh) -> f64 {
    a.positions().iter().zip(b.positions()).flat_map(|(p, q)| (0..3).map(move |c| (p[c] - q[c]).abs())).fold(0.0, f64::max)
}

#[test]
fn meshes_round_trip_through_obj_and_ply() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = add_vertex_noise(&shapes::subdivided_cube(3), 0.2, 7).unwrap();
    let (obj, ply) = (dir.path().join("m.obj"), dir.path().join("m.ply"));
    write_obj(&obj, &mesh).unwrap();
    write_ply(&ply, &mesh).unwrap();
    for back in [read_obj(&obj).unwrap(), read_ply(&ply).unwrap()] {
        assert_eq!(back.faces(), mesh.faces());
        assert!(max_position_error(&mesh, &back) <= 1e-8);
    }
}

#[test]
fn obj_quads_fan_and_indices_are_one_based() {
    let text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
    let mesh = parse_obj(text).unwrap();
    assert_eq!(mesh.faces(), &[[0, 1, 2], [0, 2, 3]]);
    let written = obj_to_string(&mesh);
    assert!(written.lines().any(|l| l == "f 1 2 3"));
    assert!(written.lines().any(|l| l == "f 1 3 4"));
}

#[test]
fn images_round_trip_in_both_encodings() {
    let dir = tempfile::tempdir().unwrap();
    let (grid, signal) = shapes::test_image(17, 9, 0.05, 2);
    let quantized: Vec<f64> = signal.values().iter().map(|v| (v * 255.0).round() / 255.0).collect();
    let image = Image { grid, signal: Signal::scalar(ElementKind::Pixel, quantized.clone()).unwrap() };
    for (name, encoding) in [("a.pgm", PnmEncoding::Plain), ("b.pgm", PnmEncoding::Raw)] {
        let path = dir.path().join(name);
        write_pnm(&path, &image, encoding).unwrap();
        let back = read_pnm(&path).unwrap();
        assert_eq!((back.grid.width(), back.grid.height()), (17, 9));
        assert_eq!(back.signal.values(), &quantized[..]);
    }
}

#[test]
fn all_black_image_reads_as_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("black.pgm");
    fs::write(&path, "P2\n3 2\n255\n0 0 0\n0 0 0\n").unwrap();
    let image = read_pnm(&path).unwrap();
    assert!(image.signal.values().iter().all(|v| *v == 0.0));
}

#[test]
fn images_with_other_maxval_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deep.pgm");
    fs::write(&path, "P2\n2 1\n65535\n0 65535\n").unwrap();
    assert!(read_pnm(&path).is_err());
}

#[test]
fn clouds_round_trip_through_xyzn() {
    let dir = tempfile::tempdir().unwrap();
    let points = shapes::fibonacci_sphere_points(50);
    let cloud = OrientedPointCloud::new(points.iter().map(|p| [2.0 * p[0], p[1] - 1.0, p[2]]).collect(), points).unwrap();
    let path = dir.path().join("c.xyzn");
    write_xyzn(&path, &cloud).unwrap();
    let back = read_xyzn(&path).unwrap();
    assert_eq!(back.renormalized, 0);
    for (a, b) in cloud.points().iter().zip(back.cloud.points()).chain(cloud.normals().iter().zip(back.cloud.normals())) {
        assert!((0..3).all(|c| (a[c] - b[c]).abs() <= 1e-8));
    }
}

#[test]
fn signals_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let signal = Signal::new(ElementKind::Vertex, 2, vec![0.5, -1.25, 3e-7, 12345.678]).unwrap();
    write_signal_csv(&path, &signal).unwrap();
    let back = read_signal_csv(&path, ElementKind::Vertex).unwrap();
    assert_eq!(back.channels(), 2);
    assert!(signal.max_abs_diff(&back) <= 1e-4);
}

#[test]
fn histogram_rows_sum_to_one_with_a_column_per_bin() {
    let cube = shapes::subdivided_cube(4);
    let t = face_diffusion(&cube, 2.0, 1).unwrap();
    let range = RangeSpace::sphere_polyhedral(1, 0.1).unwrap();
    let field = local_histograms(&cube.face_normals(), &FilterParams::new(&range, &t)).unwrap();
    let text = histograms_to_string(&field);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), range.sample_count() + 1);
    assert_eq!(header[0], "element");
    let mut rows = 0;
    for (x, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), header.len());
        assert_eq!(cells[0], x.to_string());
        let sum: f64 = cells[1..].iter().map(|c| c.parse::<f64>().unwrap()).sum();
        assert!((sum - 1.0).abs() <= 1e-5, "row {x} sums to {sum}");
        rows += 1;
    }
    assert_eq!(rows, cube.face_count());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    write_histograms_csv(&path, &field).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn writers_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = add_vertex_noise(&shapes::icosphere(2, 1.0), 0.1, 3).unwrap();
    let (a, b) = (dir.path().join("a.ply"), dir.path().join("b.ply"));
    write_ply(&a, &mesh).unwrap();
    write_ply(&b, &mesh).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn failed_writes_leave_nothing_behind() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.obj");
    fs::write(&target, "keep me").unwrap();
    // A directory in place of the file makes the final rename fail.
    let blocked = dir.path().join("blocked.obj");
    fs::create_dir(&blocked).unwrap();
    fs::write(blocked.join("inside"), "x").unwrap();
    let err = write_atomic(&blocked, b"data").unwrap_err();
    assert!(matches!(err, IoError::File { .. }), "{err}");
    assert!(err.to_string().contains("blocked.obj"));

    let missing = dir.path().join("no-such-dir").join("out.obj");
    assert!(matches!(write_atomic(&missing, b"data"), Err(IoError::File { .. })));

    write_atomic(&target, b"new").unwrap();
    assert_eq!(fs::read_to_string(&target).unwrap(), "new");
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert_eq!(names, ["blocked.obj", "out.obj"]);
}

#[test]
fn missing_input_names_the_path() {
    let err = read_obj(std::path::Path::new("/nonexistent/mesh.obj")).unwrap_err();
    assert!(err.to_string().starts_with("/nonexistent/mesh.obj: "), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn obj_round_trip_keeps_nine_digits(noise in 0.0f64..0.4, seed in any::<u64>(), scale in -6i32..6) {
        let s = 10f64.powi(scale);
        let base = add_vertex_noise(&shapes::subdivided_cube(2), noise, seed).unwrap();
        let mesh = base.with_positions(base.positions().iter().map(|p| [p[0] * s, p[1] * s, p[2] * s]).collect()).unwrap();
        let back = parse_obj(&obj_to_string(&mesh)).unwrap();
        prop_assert_eq!(back.faces(), mesh.faces());
        for (p, q) in mesh.positions().iter().zip(back.positions()) {
            for c in 0..3 {
                prop_assert!((p[c] - q[c]).abs() <= 1e-8 * p[c].abs().max(1e-300));
            }
        }
    }

    #[test]
    fn raw_pnm_round_trip_is_exact(w in 1usize..20, h in 1usize..20, seed in any::<u64>(), rgb in any::<bool>()) {
        let grid = GridDomain::new(w, h).unwrap();
        let ch = if rgb { 3 } else { 1 };
        let mut rng = genshift_core::rng::Rng::new(seed);
        let values: Vec<f64> = (0..grid.len() * ch).map(|_| (rng.uniform() * 255.0).floor() / 255.0).collect();
        let image = Image { grid, signal: Signal::new(ElementKind::Pixel, ch, values.clone()).unwrap() };
        let back = genshift::io::parse_pnm(&pnm_to_bytes(&image, PnmEncoding::Raw).unwrap()).unwrap();
        prop_assert_eq!(back.signal.channels(), ch);
        prop_assert_eq!(back.signal.values(), &values[..]);
    }
}
