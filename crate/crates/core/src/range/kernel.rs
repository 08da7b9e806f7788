use crate::error::{Error, Result};
use crate::math::exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeKernelKind {
    /// `exp(-|p - q|^2 / sigma^2)` for points of any dimension.
    Gaussian,
    /// `exp((p . q - 1) / sigma)` for unit vectors: the Von Mises-Fisher
    /// kernel divided by its peak value `exp(1 / sigma)`.
    VonMisesFisher,
}

/// Similarity kernel on the range manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeKernel {
    kind: RangeKernelKind,
    width: f64,
    scale: f64,
}

impl RangeKernel {
    /// Tolerance on input norms for the Von Mises-Fisher kernel.
    pub const UNIT_TOLERANCE: f64 = 1e-6;

    pub fn gaussian(width: f64) -> Result<Self> {
        Self::new(RangeKernelKind::Gaussian, width)
    }

    pub fn von_mises_fisher(width: f64) -> Result<Self> {
        Self::new(RangeKernelKind::VonMisesFisher, width)
    }

    pub fn new(kind: RangeKernelKind, width: f64) -> Result<Self> {
        if !(width > 0.0) || width.is_nan() {
            return Err(Error::InvalidParameter("range kernel width must be positive"));
        }
        Ok(Self { kind, width, scale: 1.0 })
    }

    /// The same kernel multiplied by a positive constant.
    pub fn scaled(self, factor: f64) -> Self {
        Self { scale: self.scale * factor, ..self }
    }

    pub fn kind(&self) -> RangeKernelKind {
        self.kind
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Kernel value without input validation.
    #[inline]
    pub fn eval(&self, p: &[f64], q: &[f64]) -> f64 {
        match self.kind {
            RangeKernelKind::Gaussian => {
                let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                self.scale * exp(-d2 / (self.width * self.width))
            }
            RangeKernelKind::VonMisesFisher => {
                let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
                self.scale * exp((dot - 1.0) / self.width)
            }
        }
    }

    /// Kernel value; the Von Mises-Fisher kernel rejects non-unit inputs.
    pub fn try_eval(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        if p.len() != q.len() {
            return Err(Error::ChannelMismatch { expected: p.len(), found: q.len() });
        }
        if self.kind == RangeKernelKind::VonMisesFisher {
            for (index, v) in [p, q].into_iter().enumerate() {
                let norm = crate::math::sqrt(v.iter().map(|x| x * x).sum());
                if (norm - 1.0).abs() > Self::UNIT_TOLERANCE {
                    return Err(Error::NonUnitVector { index, norm });
                }
            }
        }
        Ok(self.eval(p, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_values() {
        let k = RangeKernel::gaussian(0.3).unwrap();
        assert_eq!(k.eval(&[0.4], &[0.4]), 1.0);
        assert!((k.eval(&[0.1], &[0.4]) - (-1f64).exp()).abs() < 1e-15);
        assert!((k.eval(&[0.1], &[0.4]) - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn vmf_values() {
        let k = RangeKernel::von_mises_fisher(0.5).unwrap();
        let p = [0.0, 0.0, 1.0];
        assert_eq!(k.eval(&p, &p), 1.0);
        let v = k.eval(&p, &[0.0, 0.0, -1.0]);
        assert!((v - (-4f64).exp()).abs() < 1e-15);
        assert!((v - 0.018316).abs() < 1e-6);
    }

    #[test]
    fn vmf_rejects_non_unit() {
        let k = RangeKernel::von_mises_fisher(0.5).unwrap();
        assert!(matches!(k.try_eval(&[0.0, 0.0, 1.1], &[1.0, 0.0, 0.0]), Err(Error::NonUnitVector { .. })));
        assert!(k.try_eval(&[0.0, 0.0, 1.0 + 1e-8], &[1.0, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn rejects_bad_width() {
        assert!(RangeKernel::gaussian(0.0).is_err());
        assert!(RangeKernel::von_mises_fisher(-1.0).is_err());
    }

    #[test]
    fn symmetric_exactly() {
        let k = RangeKernel::von_mises_fisher(0.2).unwrap();
        let p = [0.6, 0.0, 0.8];
        let q = [0.0, 0.28, 0.96];
        assert_eq!(k.eval(&p, &q).to_bits(), k.eval(&q, &p).to_bits());
        let g = RangeKernel::gaussian(0.2).unwrap();
        assert_eq!(g.eval(&p, &q).to_bits(), g.eval(&q, &p).to_bits());
    }
}
