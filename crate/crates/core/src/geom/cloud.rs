use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{ElementKind, Signal};
use crate::math::{norm, Vec3};

/// Sample points with one unit normal each.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPointCloud {
    points: Vec<Vec3>,
    normals: Vec<Vec3>,
}

impl OrientedPointCloud {
    pub const UNIT_TOLERANCE: f64 = 1e-9;

    pub fn new(points: Vec<Vec3>, normals: Vec<Vec3>) -> Result<Self> {
        if points.len() != normals.len() {
            return Err(Error::ShapeMismatch { expected: points.len(), found: normals.len() });
        }
        for (i, p) in points.iter().enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteValue { index: i });
            }
        }
        for (i, n) in normals.iter().enumerate() {
            let len = norm(*n);
            if !len.is_finite() || (len - 1.0).abs() > Self::UNIT_TOLERANCE {
                return Err(Error::NonUnitVector { index: i, norm: len });
            }
        }
        Ok(Self { points, normals })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn normal_signal(&self) -> Signal {
        Signal::from_vectors(ElementKind::Point, &self.normals).expect("validated normals")
    }

    /// Same points with replacement normals.
    pub fn with_normals(&self, normals: Vec<Vec3>) -> Result<Self> {
        Self::new(self.points.clone(), normals)
    }
}
