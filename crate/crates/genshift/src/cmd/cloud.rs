use std::io::Write;

use anyhow::{Context, Result};
use genshift_core::pipeline::filter_cloud_normals;

use super::Report;
use crate::cli::{check_positive, CloudArgs};
use crate::io::{read_xyzn, write_xyzn};

pub fn run(args: &CloudArgs, out: &mut dyn Write) -> Result<()> {
    check_positive("graph-width", args.t)?;
    let cfg = super::denoise::denoise_config(&args.filter, 1)?;
    let input = read_xyzn(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    if input.renormalized > 0 {
        eprintln!("genshift: warning: renormalized {} normals that were not unit length", input.renormalized);
    }
    let (cloud, r) = filter_cloud_normals(&input.cloud, &cfg, args.k, args.t)?;
    write_xyzn(&args.output, &cloud).with_context(|| format!("writing {}", args.output.display()))?;
    let mut report = Report::new(out, args.report);
    report.int("points", cloud.len())?;
    report.int("renormalized", input.renormalized)?;
    report.int("iterations", r.iterations)?;
    report.flag("converged", r.converged)?;
    report.float("last_change_deg", super::last_change(&r.changes).to_degrees())?;
    report.int("fallbacks", r.fallback_count)?;
    report.int("degenerate", r.degenerate_count)?;
    Ok(())
}
