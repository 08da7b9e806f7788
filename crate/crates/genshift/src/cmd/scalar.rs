use std::io::Write;

use anyhow::{Context, Result};
use genshift_core::pipeline::{filter_vertex_scalar, ScalarConfig};
use genshift_core::ElementKind;

use super::{read_mesh, Report};
use crate::cli::{check_positive, MeshScalarArgs};
use crate::io::{read_signal_csv, write_signal_csv};

pub fn run(args: &MeshScalarArgs, out: &mut dyn Write) -> Result<()> {
    check_positive("sigma-s", args.sigma_s)?;
    check_positive("sigma-r", args.sigma_r)?;
    check_positive("tolerance", args.tolerance)?;
    let mesh = read_mesh(&args.input)?;
    let signal = read_signal_csv(&args.signal, ElementKind::Vertex)
        .with_context(|| format!("reading {}", args.signal.display()))?;
    let cfg = ScalarConfig {
        sigma_s: args.sigma_s,
        sigma_r: args.sigma_r,
        samples: args.samples,
        level: args.samples_level,
        mode: args.mode.into(),
        guide: args.cross.into(),
        max_iterations: args.max_iters,
        tolerance: args.tolerance,
    };
    let r = filter_vertex_scalar(&mesh, &signal, &cfg)?;
    let mut report = Report::new(out, args.report);
    report.int("vertices", mesh.vertex_count())?;
    report.int("iterations", r.iterations)?;
    report.flag("converged", r.converged)?;
    report.float("last_change", super::last_change(&r.changes))?;
    report.int("fallbacks", r.fallback_count)?;
    write_signal_csv(&args.output, &r.signal).with_context(|| format!("writing {}", args.output.display()))
}
