use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use genshift_core::filters::{blur_samples, FilterParams};
use genshift_core::pipeline::face_diffusion;
use genshift_core::range::RangeSpace;
use genshift_core::Signal;

use super::read_mesh;
use crate::cli::{check_positive, BenchArgs};
use crate::io::format_sig;

/// Wall time of each phase of one bilateral pass over face normals.
#[derive(Debug, Clone, Copy)]
pub struct PhaseTimes {
    pub factor: Duration,
    pub blur: Duration,
    pub accumulate: Duration,
}

impl PhaseTimes {
    pub fn total(&self) -> Duration {
        self.factor + self.blur + self.accumulate
    }
}

/// FNV-1a over the bit patterns of `values`; equal outputs hash equal.
pub fn checksum(values: &[f64]) -> u64 {
    values.iter().flat_map(|v| v.to_bits().to_le_bytes()).fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// One timed pass: factor the face heat step, blur every active sample,
/// blend. Runs on the current rayon pool.
pub fn timed_pass(mesh: &genshift_core::TriangleMesh, range: &RangeSpace, sigma_s: f64) -> Result<(PhaseTimes, Signal)> {
    let normals = mesh.face_normals();
    let t0 = Instant::now();
    let blur = face_diffusion(mesh, sigma_s, 1)?;
    let t1 = Instant::now();
    let samples = blur_samples(&normals, &normals, &FilterParams::new(range, &blur))?;
    let t2 = Instant::now();
    let out = samples.accumulate()?;
    let t3 = Instant::now();
    Ok((PhaseTimes { factor: t1 - t0, blur: t2 - t1, accumulate: t3 - t2 }, out.signal))
}

pub fn run(args: &BenchArgs, threads: &[u32], out: &mut dyn Write) -> Result<()> {
    check_positive("sigma-s", args.sigma_s)?;
    check_positive("sigma-r", args.sigma_r)?;
    let mesh = read_mesh(&args.input)?;
    let range = RangeSpace::sphere_polyhedral(args.samples_level, args.sigma_r)?;
    let counts: Vec<usize> = if threads.is_empty() {
        let all = std::thread::available_parallelism().map_or(1, |n| n.get());
        if all > 1 { vec![1, all] } else { vec![1] }
    } else {
        threads.iter().map(|&t| t as usize).collect()
    };
    writeln!(out, "faces={}", mesh.face_count())?;
    writeln!(out, "samples={}", range.sample_count())?;
    let mut sums = Vec::new();
    for &n in &counts {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().context("cannot start worker threads")?;
        let mut best: Option<PhaseTimes> = None;
        let mut sum = 0;
        for _ in 0..args.repeats {
            let (times, signal) = pool.install(|| timed_pass(&mesh, &range, args.sigma_s))?;
            sum = checksum(signal.values());
            if best.is_none_or(|b| times.total() < b.total()) {
                best = Some(times);
            }
        }
        let b = best.expect("at least one repeat");
        let secs = |d: Duration| format_sig(d.as_secs_f64(), 4);
        writeln!(
            out,
            "threads={n} factor_s={} blur_s={} accumulate_s={} total_s={} checksum={sum:016x}",
            secs(b.factor),
            secs(b.blur),
            secs(b.accumulate),
            secs(b.total()),
        )?;
        sums.push(sum);
    }
    writeln!(out, "identical_across_threads={}", sums.windows(2).all(|w| w[0] == w[1]))?;
    Ok(())
}
