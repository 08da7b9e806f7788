use std::io::Write;

use anyhow::{bail, Result};
use genshift_core::pipeline::{enhance, EnhanceConfig};

use super::{read_mesh, write_mesh, Report};
use crate::cli::{check_positive, EnhanceArgs};

pub fn run(args: &EnhanceArgs, out: &mut dyn Write) -> Result<()> {
    check_positive("sigma-s", args.sigma_s)?;
    check_positive("sigma-r", args.sigma_r)?;
    if args.lambda < 0.0 || !args.lambda.is_finite() {
        bail!("--lambda must be a nonnegative number, got {}", args.lambda);
    }
    let mesh = read_mesh(&args.input)?;
    let cfg = EnhanceConfig { sigma_s: args.sigma_s, sigma_r: args.sigma_r, level: args.samples_level, gain: args.lambda };
    let r = enhance(&mesh, &cfg)?;
    write_mesh(&args.output, &r.mesh)?;
    let mut report = Report::new(out, args.report);
    report.int("vertices", mesh.vertex_count())?;
    report.float("base_displacement", r.base_displacement)?;
    report.float("enhanced_displacement", r.enhanced_displacement)?;
    Ok(())
}
