use alloc::vec::Vec;

use crate::diffusion::Blur;
use crate::exec::map_ordered;
use crate::geom::Signal;
use crate::range::RangeSpace;

/// Blurred numerator (channel-major) and denominator images of one sample.
pub(crate) struct BlurredSample {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

/// Blurs `values * K(guide, p_i)` per channel and, if asked, `K(guide, p_i)`.
pub(crate) fn blur_sample(
    values: Option<&Signal>,
    guide: &Signal,
    range: &RangeSpace,
    blur: &dyn Blur,
    i: usize,
    with_den: bool,
) -> BlurredSample {
    let n = guide.len();
    let p = range.sample(i);
    let kernel = range.kernel();
    let weight: Vec<f64> = (0..n).map(|y| kernel.eval(guide.get(y), p)).collect();
    let mut den = Vec::new();
    if with_den {
        den = alloc::vec![0.0; n];
        blur.blur_channel(&weight, &mut den);
    }
    let mut num = Vec::new();
    if let Some(values) = values {
        let ch = values.channels();
        num = alloc::vec![0.0; n * ch];
        let mut buf = alloc::vec![0.0; n];
        for c in 0..ch {
            for (y, b) in buf.iter_mut().enumerate() {
                *b = values.values()[y * ch + c] * weight[y];
            }
            blur.blur_channel(&buf, &mut num[c * n..(c + 1) * n]);
        }
    }
    BlurredSample { num, den }
}

/// Lazily computed blurred samples for a fixed (values, guide) pair.
pub(crate) struct SampleCache<'a> {
    values: Option<&'a Signal>,
    guide: &'a Signal,
    range: &'a RangeSpace,
    blur: &'a dyn Blur,
    with_den: bool,
    slots: Vec<Option<BlurredSample>>,
}

impl<'a> SampleCache<'a> {
    pub fn new(values: Option<&'a Signal>, guide: &'a Signal, range: &'a RangeSpace, blur: &'a dyn Blur, with_den: bool) -> Self {
        let slots = (0..range.sample_count()).map(|_| None).collect();
        Self { values, guide, range, blur, with_den, slots }
    }

    /// Computes every flagged sample not yet cached, in parallel.
    pub fn ensure(&mut self, needed: &[bool]) {
        let missing: Vec<usize> = (0..self.slots.len()).filter(|&i| needed[i] && self.slots[i].is_none()).collect();
        let (values, guide, range, blur, with_den) = (self.values, self.guide, self.range, self.blur, self.with_den);
        let computed = map_ordered(missing.len(), |k| blur_sample(values, guide, range, blur, missing[k], with_den));
        for (i, s) in missing.into_iter().zip(computed) {
            self.slots[i] = Some(s);
        }
    }

    pub fn get(&self, i: usize) -> &BlurredSample {
        self.slots[i].as_ref().expect("sample requested before ensure")
    }
}

/// Partition weights of every element in CSR form, ascending sample order
/// within an element.
pub(crate) struct PartitionTable {
    pub offsets: Vec<usize>,
    pub entries: Vec<(usize, f64)>,
    pub clamped: usize,
}

impl PartitionTable {
    pub fn build(range: &RangeSpace, points: &[f64]) -> Self {
        let dim = range.dim();
        let n = points.len() / dim;
        let rows = map_ordered(n, |x| {
            let mut out = Vec::new();
            let clamped = range.partition(&points[x * dim..(x + 1) * dim], &mut out);
            (out, clamped)
        });
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut entries = Vec::new();
        let mut clamped = 0;
        for (row, c) in rows {
            entries.extend_from_slice(&row);
            offsets.push(entries.len());
            clamped += c as usize;
        }
        Self { offsets, entries, clamped }
    }

    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.entries[self.offsets[x]..self.offsets[x + 1]]
    }

    pub fn used_samples(&self, m: usize) -> Vec<bool> {
        let mut used = alloc::vec![false; m];
        for &(i, _) in &self.entries {
            used[i] = true;
        }
        used
    }
}
