use std::io::Write;

use anyhow::{bail, Context, Result};
use genshift_core::diffusion::build_grid_blur;
use genshift_core::filters::{
    exact_bilateral_oracle, generalized_bilateral, mean_shift_euclidean, FilterParams, GridGaussianKernel,
};
use genshift_core::range::RangeSpace;

use super::Report;
use crate::cli::{check_positive, ImageArgs, ModeArg};
use crate::io::{read_pnm, write_pnm, Image, PnmEncoding};

/// Peak signal-to-noise ratio in dB for signals on `[0, 1]`; infinite when equal.
pub fn psnr(max_sq_error_mean: f64) -> f64 {
    if max_sq_error_mean == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * max_sq_error_mean.log10()
    }
}

pub fn run(args: &ImageArgs, out: &mut dyn Write) -> Result<()> {
    check_positive("sigma-s", args.sigma_s)?;
    check_positive("sigma-r", args.sigma_r)?;
    if args.exact && args.mode != ModeArg::Bilateral {
        bail!("--exact compares a single bilateral pass; use --mode bilateral");
    }
    let image = read_pnm(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let ch = image.signal.channels();
    // Color images use the full RGB cube as range, `samples` per axis.
    let range = if ch == 1 {
        RangeSpace::interval(args.samples, args.sigma_r)?
    } else {
        RangeSpace::unit_box(ch, args.samples, args.sigma_r)?
    };
    let blur = build_grid_blur(image.grid, args.sigma_s)?;
    let params = FilterParams::new(&range, &blur).with_max_iterations(args.max_iters).with_tolerance(args.tolerance);
    let mut report = Report::new(out, args.report);
    let filtered = match args.mode {
        ModeArg::Bilateral => {
            let r = generalized_bilateral(&image.signal, &image.signal, &params)?;
            report.int("fallbacks", r.fallback_count)?;
            report.int("clamped", r.clamped_count)?;
            r.signal
        }
        ModeArg::Meanshift => {
            let r = mean_shift_euclidean(&image.signal, &params)?;
            report.int("iterations", r.iterations)?;
            report.flag("converged", r.converged)?;
            report.float("last_change", super::last_change(&r.changes))?;
            report.int("fallbacks", r.fallback_count)?;
            r.signal
        }
    };
    report.int("width", image.grid.width())?;
    report.int("height", image.grid.height())?;
    report.int("channels", ch)?;
    report.int("range_samples", range.sample_count())?;
    if args.exact {
        let n = image.grid.len();
        let exact = exact_bilateral_oracle(
            &image.signal,
            &image.signal,
            &GridGaussianKernel::new(&blur),
            &vec![1.0; n],
            range.kernel(),
        )?;
        let diffs = filtered.values().iter().zip(exact.values()).map(|(a, b)| a - b);
        let (max_err, sq) = diffs.fold((0.0f64, 0.0), |(m, s), d| (m.max(d.abs()), s + d * d));
        report.always("max_abs_error", max_err)?;
        report.always("psnr_db", psnr(sq / filtered.values().len() as f64))?;
    }
    let encoding = if args.raw { PnmEncoding::Raw } else { PnmEncoding::Plain };
    write_pnm(&args.output, &Image { grid: image.grid, signal: filtered }, encoding)
        .with_context(|| format!("writing {}", args.output.display()))
}
