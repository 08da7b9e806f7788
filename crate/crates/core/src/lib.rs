//! Generalized cross-bilateral and mean-shift filtering for signals on
//! pixel grids, triangle meshes and oriented point clouds.
//!
//! Every filter is evaluated the same way: the range manifold is sampled,
//! each sample's weighted signal is blurred by a linear diffusion operator,
//! and the blurred samples are blended back with a partition of unity.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. The `parallel` feature runs the per-sample blurs on rayon.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` also rejects NaN; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod diffusion;
pub mod error;
pub mod filters;
pub mod geom;
pub mod math;
pub mod pipeline;
pub mod range;
pub mod rng;
pub mod shapes;
pub mod sparse;

mod exec;

pub use error::{Error, Result};
pub use geom::{ElementKind, GridDomain, OrientedPointCloud, Signal, TriangleMesh};
