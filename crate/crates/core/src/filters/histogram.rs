use alloc::vec::Vec;

use super::samples::blur_sample;
use super::FilterParams;
use crate::error::{Error, Result};
use crate::exec::map_ordered;
use crate::geom::Signal;

/// A discrete distribution over the range samples at every element.
#[derive(Debug, Clone)]
pub struct HistogramField {
    bins: Vec<f64>,
    samples: Vec<f64>,
    dim: usize,
    uniform_rows: usize,
}

impl HistogramField {
    /// Number of elements.
    pub fn len(&self) -> usize {
        self.bins.len() / self.sample_count()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len() / self.dim
    }

    /// Coordinates of range sample `i`.
    pub fn sample(&self, i: usize) -> &[f64] {
        &self.samples[i * self.dim..(i + 1) * self.dim]
    }

    /// The bins of element `x`, summing to one.
    pub fn row(&self, x: usize) -> &[f64] {
        let m = self.sample_count();
        &self.bins[x * m..(x + 1) * m]
    }

    /// Rows that had no mass and were replaced by the uniform distribution.
    pub fn uniform_rows(&self) -> usize {
        self.uniform_rows
    }

    /// Index of the heaviest bin of element `x` (lowest index on ties).
    pub fn mode(&self, x: usize) -> usize {
        let row = self.row(x);
        let mut best = 0;
        for (i, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = i;
            }
        }
        best
    }
}

/// Local histograms of `f`: bin `i` at element `x` is the blurred kernel
/// image `T(K(f, p_i))(x)` times the integral of partition function `i`,
/// normalized so each element's bins sum to one.
pub fn local_histograms(f: &Signal, params: &FilterParams<'_>) -> Result<HistogramField> {
    params.validate()?;
    params.check_guide(f)?;
    let range = params.range;
    let blur = params.blur;
    let m = range.sample_count();
    let n = f.len();
    if n == 0 {
        return Err(Error::InvalidParameter("histograms need at least one element"));
    }
    let weights = range.quadrature_weights();
    let dens = map_ordered(m, |i| blur_sample(None, f, range, blur, i, true).den);
    let mut bins = alloc::vec![0.0; n * m];
    let mut uniform_rows = 0;
    for x in 0..n {
        let row = &mut bins[x * m..(x + 1) * m];
        for i in 0..m {
            row[i] = dens[i][x] * weights[i];
        }
        let total: f64 = row.iter().sum();
        if total > 0.0 && total.is_finite() {
            for b in row.iter_mut() {
                *b /= total;
            }
        } else {
            row.fill(1.0 / m as f64);
            uniform_rows += 1;
        }
    }
    Ok(HistogramField { bins, samples: range.samples().to_vec(), dim: range.dim(), uniform_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{build_cotan_laplacian, heat_step};
    use crate::geom::ElementKind;
    use crate::range::RangeSpace;
    use crate::shapes;

    #[test]
    fn constant_signal_gives_kernel_profile() {
        let mesh = shapes::icosphere(2, 1.0);
        let d = build_cotan_laplacian(&mesh);
        let t = heat_step(&d.laplacian, &d.mass, 0.02).unwrap();
        let rs = RangeSpace::interval(15, 0.2).unwrap();
        let f = Signal::constant(ElementKind::Vertex, mesh.vertex_count(), &[0.3]);
        let h = local_histograms(&f, &FilterParams::new(&rs, &t)).unwrap();
        let w = rs.quadrature_weights();
        let profile: Vec<f64> = (0..15).map(|i| (-(rs.sample(i)[0] - 0.3f64).powi(2) / 0.04).exp() * w[i]).collect();
        let z: f64 = profile.iter().sum();
        for x in 0..h.len() {
            for i in 0..15 {
                assert!((h.row(x)[i] - profile[i] / z).abs() < 1e-10);
            }
        }
        assert_eq!(h.uniform_rows(), 0);
    }
}
