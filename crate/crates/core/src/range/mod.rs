//! The range manifold: sample points, kernels and partitions of unity on
//! the unit interval, unit boxes and the unit sphere.

mod kernel;
mod mse;
mod space;
mod sphere;

pub use kernel::{RangeKernel, RangeKernelKind};
pub use mse::reconstruction_mse;
pub use space::{Manifold, PartitionScheme, RangeSpace};
pub use sphere::{tetrahedron_directions, SphericalPolyhedron};
