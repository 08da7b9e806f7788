//! Domains (triangle meshes, pixel grids, oriented point clouds) and the
//! per-element signals attached to them.

mod cloud;
mod curvature;
mod grid;
mod mesh;
mod signal;

pub use cloud::OrientedPointCloud;
pub use curvature::{mean_curvature, vertex_normals};
pub use grid::GridDomain;
pub use mesh::{Edge, TriangleMesh};
pub use signal::{ElementKind, Signal};
