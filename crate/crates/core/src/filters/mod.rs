//! Bilateral, mean-shift and local-histogram filters evaluated by blurring
//! per-sample kernel images and blending them with a partition of unity.

mod bilateral;
mod histogram;
mod mean_shift;
mod oracle;
mod samples;
mod unsharp;

pub use bilateral::{blur_samples, generalized_bilateral, BilateralOutput, BlurredSamples};
pub use histogram::{local_histograms, HistogramField};
pub use mean_shift::{
    mean_shift_euclidean, mean_shift_euclidean_from, mean_shift_spherical, mean_shift_spherical_from, MeanShiftOutput,
};
pub use oracle::{exact_bilateral_oracle, DenseKernel, GridGaussianKernel, SpatialKernel, ORACLE_ELEMENT_LIMIT};
pub use unsharp::{substitute_kernel_unsharp, Unsharp};

use crate::diffusion::Blur;
use crate::error::{Error, Result};
use crate::geom::Signal;
use crate::range::{Manifold, RangeSpace};

/// Default stopping tolerance on the unit interval or box.
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
/// Default stopping tolerance on the sphere: 0.01 degrees, in radians.
pub const DEFAULT_SPHERE_TOLERANCE: f64 = 0.01 * core::f64::consts::PI / 180.0;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;
/// Denominators below this fraction of the largest one fall back.
pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-12;

/// Everything a filter needs besides its input signals.
#[derive(Clone, Copy)]
pub struct FilterParams<'a> {
    pub range: &'a RangeSpace,
    pub blur: &'a dyn Blur,
    pub max_iterations: usize,
    /// Stopping threshold on the largest per-element change (range units,
    /// radians on the sphere).
    pub tolerance: f64,
    pub denominator_floor: f64,
}

impl<'a> FilterParams<'a> {
    pub fn new(range: &'a RangeSpace, blur: &'a dyn Blur) -> Self {
        let tolerance = match range.manifold() {
            Manifold::Sphere => DEFAULT_SPHERE_TOLERANCE,
            _ => DEFAULT_TOLERANCE,
        };
        Self { range, blur, max_iterations: DEFAULT_MAX_ITERATIONS, tolerance, denominator_floor: DEFAULT_DENOMINATOR_FLOOR }
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Self { tolerance, ..self }
    }

    pub fn with_max_iterations(self, max_iterations: usize) -> Self {
        Self { max_iterations, ..self }
    }

    pub fn with_denominator_floor(self, denominator_floor: f64) -> Self {
        Self { denominator_floor, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        if !(self.denominator_floor > 0.0) {
            return Err(Error::InvalidParameter("denominator floor must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max iterations must be >= 1"));
        }
        Ok(())
    }

    /// Checks that `guide` lives on the range manifold and on the blur's domain.
    fn check_guide(&self, guide: &Signal) -> Result<()> {
        guide.check_len(self.blur.len())?;
        if guide.channels() != self.range.dim() {
            return Err(Error::ChannelMismatch { expected: self.range.dim(), found: guide.channels() });
        }
        if self.range.manifold() == Manifold::Sphere {
            guide.check_unit(crate::range::RangeKernel::UNIT_TOLERANCE)?;
        }
        Ok(())
    }
}
