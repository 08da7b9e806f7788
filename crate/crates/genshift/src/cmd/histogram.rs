use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use genshift_core::diffusion::{build_cotan_laplacian, heat_step};
use genshift_core::filters::{local_histograms, FilterParams};
use genshift_core::pipeline::{diffusion_time, face_diffusion};
use genshift_core::range::RangeSpace;
use genshift_core::{ElementKind, Signal};

use super::{read_mesh, Report};
use crate::cli::{check_positive, HistogramArgs};
use crate::io::{read_signal_csv, write_histograms_csv};

pub fn run(args: &HistogramArgs, out: &mut dyn Write) -> Result<()> {
    check_positive("sigma-s", args.sigma_s)?;
    check_positive("sigma-r", args.sigma_r)?;
    let mesh = read_mesh(&args.input)?;
    let mut report = Report::new(out, args.report);
    let field = if args.signal == "normals" {
        let blur = face_diffusion(&mesh, args.sigma_s, 1)?;
        let range = RangeSpace::sphere_polyhedral(args.samples_level, args.sigma_r)?;
        local_histograms(&mesh.face_normals(), &FilterParams::new(&range, &blur))?
    } else {
        let path = Path::new(&args.signal);
        let raw = read_signal_csv(path, ElementKind::Vertex).with_context(|| format!("reading {}", path.display()))?;
        if raw.len() != mesh.vertex_count() || raw.channels() != 1 {
            bail!("{}: expected one value per vertex ({} rows)", path.display(), mesh.vertex_count());
        }
        // Bins cover [min, max] of the signal, mapped onto the unit interval.
        let lo = raw.values().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = raw.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let unit = Signal::scalar(ElementKind::Vertex, raw.values().iter().map(|v| (v - lo) / span).collect())
?;
        report.float("signal_min", lo)?;
        report.float("signal_max", hi)?;
        let d = build_cotan_laplacian(&mesh);
        let blur = heat_step(&d.laplacian, &d.mass, diffusion_time(args.sigma_s, mesh.mean_edge_length()))?;
        let range = RangeSpace::interval(args.samples, args.sigma_r)?;
        local_histograms(&unit, &FilterParams::new(&range, &blur))?
    };
    write_histograms_csv(&args.output, &field).with_context(|| format!("writing {}", args.output.display()))?;
    report.int("elements", field.len())?;
    report.int("bins", field.sample_count())?;
    report.int("uniform_rows", field.uniform_rows())?;
    Ok(())
}
