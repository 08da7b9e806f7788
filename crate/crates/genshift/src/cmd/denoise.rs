use std::io::Write;

use anyhow::Result;
use genshift_core::pipeline::{add_vertex_noise, denoise_mesh, vertex_rmse, DenoiseConfig};

use super::{read_mesh, write_mesh, Report};
use crate::cli::{check_positive, MeshDenoiseArgs, NormalFilterArgs};

/// Core configuration from the shared normal-filter flags.
pub(crate) fn denoise_config(f: &NormalFilterArgs, recon_iterations: usize) -> Result<DenoiseConfig> {
    check_positive("sigma-s", f.sigma_s)?;
    check_positive("sigma-r", f.sigma_r)?;
    check_positive("tolerance-deg", f.tolerance_deg)?;
    let cfg = DenoiseConfig {
        sigma_s: f.sigma_s,
        sigma_r: f.sigma_r,
        partition: f.partition(),
        mode: f.mode.into(),
        max_iterations: f.max_iters,
        tolerance: f.tolerance_deg.to_radians(),
        recon_iterations,
        time_steps: 1,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(args: &MeshDenoiseArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = denoise_config(&args.filter, args.recon_iters)?;
    let clean = read_mesh(&args.input)?;
    let noisy = match args.noise {
        Some(a) => add_vertex_noise(&clean, a, args.seed)?,
        None => clean.clone(),
    };
    if let Some(path) = &args.noisy_output {
        write_mesh(path, &noisy)?;
    }
    let r = denoise_mesh(&noisy, &cfg)?;
    write_mesh(&args.output, &r.mesh)?;
    let mut report = Report::new(out, args.report);
    report.int("vertices", noisy.vertex_count())?;
    report.int("faces", noisy.face_count())?;
    report.float("mean_edge_length", noisy.mean_edge_length())?;
    report.int("iterations", r.normals.iterations)?;
    report.flag("converged", r.normals.converged)?;
    report.float("last_change_deg", super::last_change(&r.normals.changes).to_degrees())?;
    report.int("fallbacks", r.normals.fallback_count)?;
    report.int("degenerate", r.normals.degenerate_count)?;
    if args.noise.is_some() {
        let before = vertex_rmse(&clean, &noisy)?;
        let after = vertex_rmse(&clean, &r.mesh)?;
        report.float("rmse_noisy", before)?;
        report.float("rmse_denoised", after)?;
        report.float("rmse_reduction", if before > 0.0 { 1.0 - after / before } else { 0.0 })?;
    }
    Ok(())
}
