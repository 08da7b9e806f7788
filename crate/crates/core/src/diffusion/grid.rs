use alloc::vec::Vec;

use super::Blur;
use crate::error::{Error, Result};
use crate::geom::GridDomain;
use crate::math::{ceil, exp};

/// Separable truncated Gaussian on a pixel grid, renormalized per pixel so
/// the taps that fall inside the image sum to one.
#[derive(Debug, Clone)]
pub struct GridBlur {
    grid: GridDomain,
    sigma: f64,
    taps: Vec<f64>,
}

/// Builds the grid blur with weights `exp(-d^2 / (2 sigma^2))`, radius `ceil(3 sigma)`.
pub fn build_grid_blur(grid: GridDomain, sigma: f64) -> Result<GridBlur> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter("spatial sigma must be positive"));
    }
    let radius = ceil(3.0 * sigma) as usize;
    let taps = (0..=radius).map(|d| exp(-((d * d) as f64) / (2.0 * sigma * sigma))).collect();
    Ok(GridBlur { grid, sigma, taps })
}

impl GridBlur {
    pub fn grid(&self) -> GridDomain {
        self.grid
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn radius(&self) -> usize {
        self.taps.len() - 1
    }

    /// Unnormalized tap weight at integer offset `d`, zero beyond the radius.
    pub fn tap(&self, d: usize) -> f64 {
        self.taps.get(d).copied().unwrap_or(0.0)
    }

    fn pass(&self, input: &[f64], output: &mut [f64], len: usize, lines: usize, stride: usize, step: usize) {
        let r = self.radius() as isize;
        for line in 0..lines {
            let base = line * stride;
            for i in 0..len as isize {
                let (mut acc, mut norm) = (0.0, 0.0);
                let lo = (i - r).max(0);
                let hi = (i + r).min(len as isize - 1);
                for j in lo..=hi {
                    let w = self.taps[(i - j).unsigned_abs()];
                    acc += w * input[base + j as usize * step];
                    norm += w;
                }
                output[base + i as usize * step] = acc / norm;
            }
        }
    }
}

impl Blur for GridBlur {
    fn len(&self) -> usize {
        self.grid.len()
    }

    fn blur_channel(&self, input: &[f64], output: &mut [f64]) {
        let (w, h) = (self.grid.width(), self.grid.height());
        let mut tmp = alloc::vec![0.0; input.len()];
        self.pass(input, &mut tmp, w, h, w, 1);
        self.pass(&tmp, output, h, w, 1, w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn constant_image_is_exact() {
        let g = GridDomain::new(17, 9).unwrap();
        let b = build_grid_blur(g, 2.5).unwrap();
        let v = alloc::vec![0.37; g.len()];
        let mut out = alloc::vec![0.0; g.len()];
        b.blur_channel(&v, &mut out);
        assert!(out.iter().all(|&x| (x - 0.37).abs() < 1e-15));
    }

    #[test]
    fn impulse_center_weight() {
        let g = GridDomain::new(33, 33).unwrap();
        let b = build_grid_blur(g, 2.0).unwrap();
        let mut v = alloc::vec![0.0; g.len()];
        v[g.index(16, 16)] = 1.0;
        let mut out = alloc::vec![0.0; g.len()];
        b.blur_channel(&v, &mut out);
        // Direct evaluation of the normalized 2D discrete Gaussian at offset 0.
        let mut z = 0.0;
        for dy in -6i32..=6 {
            for dx in -6i32..=6 {
                z += (-((dx * dx + dy * dy) as f64) / 8.0).exp();
            }
        }
        assert!((out[g.index(16, 16)] - 1.0 / z).abs() < 1e-15);
    }

    #[test]
    fn commutes_with_mirroring() {
        let g = GridDomain::new(20, 13).unwrap();
        let b = build_grid_blur(g, 1.7).unwrap();
        let mut rng = Rng::new(2);
        let v: Vec<f64> = (0..g.len()).map(|_| rng.uniform()).collect();
        let mirror = |x: &[f64]| {
            let mut m = alloc::vec![0.0; x.len()];
            for y in 0..13 {
                for c in 0..20 {
                    m[g.index(c, y)] = x[g.index(19 - c, y)];
                }
            }
            m
        };
        let mut a = alloc::vec![0.0; g.len()];
        let mut bm = alloc::vec![0.0; g.len()];
        b.blur_channel(&v, &mut a);
        b.blur_channel(&mirror(&v), &mut bm);
        let am = mirror(&a);
        assert!(am.iter().zip(&bm).all(|(p, q)| (p - q).abs() <= 1e-12));
    }

    #[test]
    fn rejects_non_positive_sigma() {
        let g = GridDomain::new(4, 4).unwrap();
        assert!(build_grid_blur(g, 0.0).is_err());
        assert!(build_grid_blur(g, -1.0).is_err());
    }
}
