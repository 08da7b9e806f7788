use alloc::vec::Vec;

use crate::diffusion::{Blur, GridBlur, MassMatrix};
use crate::error::{Error, Result};
use crate::exec::map_ordered;
use crate::geom::Signal;
use crate::range::RangeKernel;

/// Largest element count the dense oracle accepts.
pub const ORACLE_ELEMENT_LIMIT: usize = 5000;

/// A spatial kernel `K(x, y)` evaluated entry by entry.
pub trait SpatialKernel: Sync {
    fn len(&self) -> usize;
    fn weight(&self, x: usize, y: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A dense row-major kernel matrix.
#[derive(Debug, Clone)]
pub struct DenseKernel {
    n: usize,
    values: Vec<f64>,
}

impl DenseKernel {
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::ShapeMismatch { expected: n * n, found: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn identity(n: usize) -> Self {
        let mut values = alloc::vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
        }
        Self { n, values }
    }

    /// Extracts `K(x, y) = T(e_y)(x) / A_yy` by blurring indicator signals,
    /// so that `sum_y K(x, y) A_yy v(y) = T(v)(x)`. Without a mass matrix
    /// `A` is the identity.
    pub fn from_blur(blur: &dyn Blur, mass: Option<&MassMatrix>) -> Result<Self> {
        let n = blur.len();
        if n > ORACLE_ELEMENT_LIMIT {
            return Err(Error::OracleTooLarge { elements: n, limit: ORACLE_ELEMENT_LIMIT });
        }
        if let Some(a) = mass {
            if a.len() != n {
                return Err(Error::ShapeMismatch { expected: n, found: a.len() });
            }
        }
        let columns = map_ordered(n, |y| {
            let mut e = alloc::vec![0.0; n];
            e[y] = 1.0;
            let mut col = alloc::vec![0.0; n];
            blur.blur_channel(&e, &mut col);
            let a = mass.map_or(1.0, |m| m.diagonal()[y]);
            for c in col.iter_mut() {
                *c /= a;
            }
            col
        });
        let mut values = alloc::vec![0.0; n * n];
        for (y, col) in columns.iter().enumerate() {
            for (x, v) in col.iter().enumerate() {
                values[x * n + y] = *v;
            }
        }
        Ok(Self { n, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl SpatialKernel for DenseKernel {
    fn len(&self) -> usize {
        self.n
    }

    fn weight(&self, x: usize, y: usize) -> f64 {
        self.values[x * self.n + y]
    }
}

/// The unnormalized separable Gaussian of a grid blur,
/// `tap(|dx|) * tap(|dy|)`, zero beyond the truncation radius.
#[derive(Debug, Clone, Copy)]
pub struct GridGaussianKernel<'a> {
    blur: &'a GridBlur,
}

impl<'a> GridGaussianKernel<'a> {
    pub fn new(blur: &'a GridBlur) -> Self {
        Self { blur }
    }
}

impl SpatialKernel for GridGaussianKernel<'_> {
    fn len(&self) -> usize {
        self.blur.grid().len()
    }

    fn weight(&self, x: usize, y: usize) -> f64 {
        let w = self.blur.grid().width();
        let (x0, x1) = (x % w, x / w);
        let (y0, y1) = (y % w, y / w);
        self.blur.tap(x0.abs_diff(y0)) * self.blur.tap(x1.abs_diff(y1))
    }
}

/// Direct evaluation of the cross-bilateral double sum
/// `sum_y K(x,y) q_y K_r(f2(x), f2(y)) f1(y) / sum_y K(x,y) q_y K_r(f2(x), f2(y))`
/// with quadrature weights `q`. Elements with a zero denominator keep `f1`.
pub fn exact_bilateral_oracle(
    f1: &Signal,
    f2: &Signal,
    spatial: &dyn SpatialKernel,
    quadrature: &[f64],
    kernel: &RangeKernel,
) -> Result<Signal> {
    let n = f1.len();
    if n > ORACLE_ELEMENT_LIMIT {
        return Err(Error::OracleTooLarge { elements: n, limit: ORACLE_ELEMENT_LIMIT });
    }
    f2.check_len(n)?;
    if spatial.len() != n {
        return Err(Error::ShapeMismatch { expected: n, found: spatial.len() });
    }
    if quadrature.len() != n {
        return Err(Error::ShapeMismatch { expected: n, found: quadrature.len() });
    }
    let ch = f1.channels();
    let rows = map_ordered(n, |x| {
        let mut num = alloc::vec![0.0; ch];
        let mut den = 0.0;
        let gx = f2.get(x);
        for y in 0..n {
            let k = spatial.weight(x, y);
            if k == 0.0 {
                continue;
            }
            let w = k * quadrature[y] * kernel.eval(gx, f2.get(y));
            den += w;
            for (c, acc) in num.iter_mut().enumerate() {
                *acc += w * f1.get(y)[c];
            }
        }
        if den != 0.0 {
            num.iter_mut().for_each(|v| *v /= den);
            num
        } else {
            f1.get(x).to_vec()
        }
    });
    Signal::new(f1.kind(), ch, rows.concat())
}
