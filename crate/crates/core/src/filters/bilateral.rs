use alloc::vec::Vec;

use super::samples::{blur_sample, PartitionTable};
use super::FilterParams;
use crate::error::{Error, Result};
use crate::exec::map_ordered;
use crate::geom::{ElementKind, Signal};

/// Filtered signal with counters for elements that needed special handling.
#[derive(Debug, Clone)]
pub struct BilateralOutput {
    pub signal: Signal,
    /// Elements whose denominator fell below the floor and kept their input value.
    pub fallback_count: usize,
    /// Guide values clamped into a box range before partition evaluation.
    pub clamped_count: usize,
}

/// Per-element, per-sample blurred contributions, already weighted by the
/// partition of unity. Produced by [`blur_samples`]; [`BlurredSamples::accumulate`]
/// finishes the filter.
#[derive(Debug, Clone)]
pub struct BlurredSamples {
    kind: ElementKind,
    channels: usize,
    original: Vec<f64>,
    table_offsets: Vec<usize>,
    num: Vec<f64>,
    den: Vec<f64>,
    floor: f64,
    clamped: usize,
    active: usize,
}

/// Runs the per-sample blurs of the generalized cross-bilateral filter of
/// `f1` guided by `f2`. Samples run concurrently; each writes only its own
/// slots, so the result does not depend on scheduling.
pub fn blur_samples(f1: &Signal, f2: &Signal, params: &FilterParams<'_>) -> Result<BlurredSamples> {
    params.validate()?;
    params.check_guide(f2)?;
    f1.check_len(f2.len())?;
    if f1.kind() != f2.kind() {
        return Err(Error::InvalidParameter("f1 and f2 must live on the same elements"));
    }
    let range = params.range;
    let n = f1.len();
    let ch = f1.channels();
    let table = PartitionTable::build(range, f2.values());

    // Slots of each sample, in ascending element order.
    let m = range.sample_count();
    let mut by_sample: Vec<Vec<(usize, usize)>> = (0..m).map(|_| Vec::new()).collect();
    for x in 0..n {
        for slot in table.offsets[x]..table.offsets[x + 1] {
            by_sample[table.entries[slot].0].push((slot, x));
        }
    }
    let active: Vec<usize> = (0..m).filter(|&i| !by_sample[i].is_empty()).collect();
    let blur = params.blur;
    let parts = map_ordered(active.len(), |k| {
        let i = active[k];
        let s = blur_sample(Some(f1), f2, range, blur, i, true);
        let mut out = Vec::with_capacity(by_sample[i].len() * (ch + 1));
        for &(slot, x) in &by_sample[i] {
            let phi = table.entries[slot].1;
            for c in 0..ch {
                out.push(phi * s.num[c * n + x]);
            }
            out.push(phi * s.den[x]);
        }
        out
    });

    let slots = table.entries.len();
    let mut num = alloc::vec![0.0; slots * ch];
    let mut den = alloc::vec![0.0; slots];
    for (k, part) in parts.into_iter().enumerate() {
        for (j, &(slot, _)) in by_sample[active[k]].iter().enumerate() {
            let vals = &part[j * (ch + 1)..(j + 1) * (ch + 1)];
            num[slot * ch..(slot + 1) * ch].copy_from_slice(&vals[..ch]);
            den[slot] = vals[ch];
        }
    }
    Ok(BlurredSamples {
        kind: f1.kind(),
        channels: ch,
        original: f1.values().to_vec(),
        table_offsets: table.offsets,
        num,
        den,
        floor: params.denominator_floor,
        clamped: table.clamped,
        active: active.len(),
    })
}

impl BlurredSamples {
    /// Number of samples whose blurs were computed.
    pub fn active_samples(&self) -> usize {
        self.active
    }

    /// Sums the contributions per element in ascending sample order and
    /// takes the numerator/denominator ratio.
    pub fn accumulate(&self) -> Result<BilateralOutput> {
        let ch = self.channels;
        let n = self.table_offsets.len() - 1;
        let mut num = alloc::vec![0.0; n * ch];
        let mut den = alloc::vec![0.0; n];
        for x in 0..n {
            for slot in self.table_offsets[x]..self.table_offsets[x + 1] {
                for c in 0..ch {
                    num[x * ch + c] += self.num[slot * ch + c];
                }
                den[x] += self.den[slot];
            }
        }
        let (values, fallback_count) = ratio(&num, &den, &self.original, ch, self.floor);
        Ok(BilateralOutput { signal: Signal::new(self.kind, ch, values)?, fallback_count, clamped_count: self.clamped })
    }
}

/// `num / den` per element; elements with a denominator at or below
/// `floor * max(den)` take `fallback` instead.
pub(crate) fn ratio(num: &[f64], den: &[f64], fallback: &[f64], ch: usize, floor: f64) -> (Vec<f64>, usize) {
    let max = den.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eps = floor * max;
    let mut out = alloc::vec![0.0; num.len()];
    let mut fallbacks = 0;
    for (x, &d) in den.iter().enumerate() {
        let range = x * ch..(x + 1) * ch;
        if max > 0.0 && d > eps {
            for (o, v) in out[range.clone()].iter_mut().zip(&num[range]) {
                *o = v / d;
            }
        } else {
            out[range.clone()].copy_from_slice(&fallback[range]);
            fallbacks += 1;
        }
    }
    (out, fallbacks)
}

/// The generalized cross-bilateral filter of `f1` with range weights taken
/// from `f2`.
pub fn generalized_bilateral(f1: &Signal, f2: &Signal, params: &FilterParams<'_>) -> Result<BilateralOutput> {
    blur_samples(f1, f2, params)?.accumulate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{build_cotan_laplacian, heat_step, Blur, DiffusionOperator};
    use crate::range::RangeSpace;
    use crate::rng::Rng;
    use crate::shapes;

    fn sphere_setup() -> (crate::TriangleMesh, DiffusionOperator) {
        let mesh = shapes::icosphere(2, 1.0);
        let d = build_cotan_laplacian(&mesh);
        let l = mesh.mean_edge_length();
        let t = heat_step(&d.laplacian, &d.mass, 2.0 * l * l).unwrap();
        (mesh, t)
    }

    fn random_scalar(n: usize, seed: u64) -> Signal {
        let mut rng = Rng::new(seed);
        Signal::scalar(ElementKind::Vertex, (0..n).map(|_| rng.uniform()).collect()).unwrap()
    }

    #[test]
    fn constant_f1_is_preserved() {
        let (mesh, t) = sphere_setup();
        let rs = RangeSpace::interval(10, 0.2).unwrap();
        let params = FilterParams::new(&rs, &t);
        let f1 = Signal::constant(ElementKind::Vertex, mesh.vertex_count(), &[0.42]);
        let f2 = random_scalar(mesh.vertex_count(), 2);
        let out = generalized_bilateral(&f1, &f2, &params).unwrap();
        assert!(out.signal.values().iter().all(|v| (v - 0.42).abs() < 1e-9));
    }

    #[test]
    fn constant_f2_gives_plain_blur() {
        let (mesh, t) = sphere_setup();
        let rs = RangeSpace::interval(10, 0.2).unwrap();
        let params = FilterParams::new(&rs, &t);
        let f1 = random_scalar(mesh.vertex_count(), 3);
        let f2 = Signal::constant(ElementKind::Vertex, mesh.vertex_count(), &[0.37]);
        let out = generalized_bilateral(&f1, &f2, &params).unwrap();
        let blurred = t.apply(&f1).unwrap();
        assert!(out.signal.max_abs_diff(&blurred) < 1e-9);
    }

    #[test]
    fn output_within_input_range() {
        let (mesh, t) = sphere_setup();
        let rs = RangeSpace::interval(12, 0.15).unwrap();
        let params = FilterParams::new(&rs, &t);
        let f = random_scalar(mesh.vertex_count(), 4);
        let out = generalized_bilateral(&f, &f, &params).unwrap();
        let lo = f.values().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = f.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(out.signal.values().iter().all(|&v| v >= lo - 1e-9 && v <= hi + 1e-9));
    }

    #[test]
    fn rejects_wrong_guide() {
        let (mesh, t) = sphere_setup();
        let rs = RangeSpace::sphere_polyhedral(0, 0.5).unwrap();
        let params = FilterParams::new(&rs, &t);
        let f = random_scalar(mesh.vertex_count(), 5);
        assert!(matches!(generalized_bilateral(&f, &f, &params), Err(Error::ChannelMismatch { .. })));
        let bad = Signal::constant(ElementKind::Vertex, mesh.vertex_count(), &[0.0, 0.0, 2.0]);
        assert!(matches!(generalized_bilateral(&f, &bad, &params), Err(Error::NonUnitVector { .. })));
    }

    #[test]
    fn floor_falls_back_to_input() {
        let num = [1.0, 2.0];
        let den = [1.0, 1e-20];
        let (out, count) = ratio(&num, &den, &[7.0, 8.0], 1, 1e-12);
        assert_eq!(out, alloc::vec![1.0, 8.0]);
        assert_eq!(count, 1);
    }
}
