use alloc::vec::Vec;

use super::bilateral::ratio;
use super::samples::{PartitionTable, SampleCache};
use super::FilterParams;
use crate::error::{Error, Result};
use crate::geom::Signal;
use crate::math::{angle_between, sqrt};
use crate::range::Manifold;

/// Result of a mean-shift run.
#[derive(Debug, Clone)]
pub struct MeanShiftOutput {
    pub signal: Signal,
    /// Iterations performed, including the one that met the tolerance.
    pub iterations: usize,
    pub converged: bool,
    /// Largest per-element change of each iteration.
    pub changes: Vec<f64>,
    /// Element updates skipped because the denominator was below the floor.
    pub fallback_count: usize,
    /// Sphere updates skipped because the numerator vector vanished.
    pub degenerate_count: usize,
    pub clamped_count: usize,
}

/// Mean shift on the unit interval or box.
///
/// Every iterate is a cross-bilateral filter of the original `f`: kernels
/// are centered on the original values and only the partition weights
/// follow the current iterate. The per-sample blurs are therefore computed
/// once and reused across iterations.
pub fn mean_shift_euclidean(f: &Signal, params: &FilterParams<'_>) -> Result<MeanShiftOutput> {
    mean_shift_euclidean_from(f, f, params)
}

/// Euclidean mean shift of the density of `f`, iterated from `start`
/// instead of from `f` itself. Resumes a run cut short by the iteration cap.
pub fn mean_shift_euclidean_from(f: &Signal, start: &Signal, params: &FilterParams<'_>) -> Result<MeanShiftOutput> {
    params.validate()?;
    if params.range.manifold() == Manifold::Sphere {
        return Err(Error::InvalidParameter("euclidean mean shift needs an interval or box range"));
    }
    params.check_guide(f)?;
    params.check_guide(start)?;
    let n = f.len();
    let ch = f.channels();
    let m = params.range.sample_count();
    let mut cache = SampleCache::new(Some(f), f, params.range, params.blur, true);
    let mut current = start.values().to_vec();
    let mut out = MeanShiftOutput::start(f);
    for k in 1..=params.max_iterations {
        let table = PartitionTable::build(params.range, &current);
        out.clamped_count += table.clamped;
        cache.ensure(&table.used_samples(m));
        let mut num = alloc::vec![0.0; n * ch];
        let mut den = alloc::vec![0.0; n];
        for x in 0..n {
            for &(i, phi) in table.row(x) {
                let s = cache.get(i);
                for c in 0..ch {
                    num[x * ch + c] += phi * s.num[c * n + x];
                }
                den[x] += phi * s.den[x];
            }
        }
        let (next, fallbacks) = ratio(&num, &den, &current, ch, params.denominator_floor);
        out.fallback_count += fallbacks;
        let change = next.iter().zip(&current).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        current = next;
        if out.record(k, change, params.tolerance) {
            break;
        }
    }
    out.signal = Signal::new(f.kind(), ch, current)?;
    Ok(out)
}

/// Mean shift on the unit sphere: each iterate is the blurred,
/// kernel-weighted original field interpolated at the current iterate and
/// normalized to unit length. Changes are measured as geodesic angles.
pub fn mean_shift_spherical(f: &Signal, params: &FilterParams<'_>) -> Result<MeanShiftOutput> {
    mean_shift_spherical_from(f, f, params)
}

/// Spherical mean shift of the density of `f`, iterated from the unit
/// vectors in `start`.
pub fn mean_shift_spherical_from(f: &Signal, start: &Signal, params: &FilterParams<'_>) -> Result<MeanShiftOutput> {
    params.validate()?;
    if params.range.manifold() != Manifold::Sphere {
        return Err(Error::InvalidParameter("spherical mean shift needs a sphere range"));
    }
    params.check_guide(f)?;
    params.check_guide(start)?;
    let n = f.len();
    let m = params.range.sample_count();
    let mut cache = SampleCache::new(Some(f), f, params.range, params.blur, false);
    let mut current = start.to_vec3s();
    let mut out = MeanShiftOutput::start(f);
    for k in 1..=params.max_iterations {
        let flat: Vec<f64> = current.iter().flat_map(|v| v.iter().copied()).collect();
        let table = PartitionTable::build(params.range, &flat);
        cache.ensure(&table.used_samples(m));
        let mut num = alloc::vec![[0.0; 3]; n];
        for (x, acc) in num.iter_mut().enumerate() {
            for &(i, phi) in table.row(x) {
                let s = cache.get(i);
                for c in 0..3 {
                    acc[c] += phi * s.num[c * n + x];
                }
            }
        }
        let norms: Vec<f64> = num.iter().map(|v| sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])).collect();
        let eps = params.denominator_floor * norms.iter().copied().fold(0.0, f64::max);
        let mut change: f64 = 0.0;
        for x in 0..n {
            if norms[x] > eps && norms[x] > 0.0 {
                let v = num[x];
                let next = [v[0] / norms[x], v[1] / norms[x], v[2] / norms[x]];
                change = change.max(angle_between(current[x], next));
                current[x] = next;
            } else {
                out.degenerate_count += 1;
            }
        }
        if out.record(k, change, params.tolerance) {
            break;
        }
    }
    out.signal = Signal::from_vectors(f.kind(), &current)?;
    Ok(out)
}

impl MeanShiftOutput {
    fn start(f: &Signal) -> Self {
        Self {
            signal: f.clone(),
            iterations: 0,
            converged: false,
            changes: Vec::new(),
            fallback_count: 0,
            degenerate_count: 0,
            clamped_count: 0,
        }
    }

    /// Records iteration `k`; returns true when the tolerance is met.
    fn record(&mut self, k: usize, change: f64, tolerance: f64) -> bool {
        self.iterations = k;
        self.changes.push(change);
        self.converged = change <= tolerance;
        self.converged
    }
}
