use crate::error::{Error, Result};

/// A `width x height` pixel grid; pixels are indexed row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDomain {
    width: usize,
    height: usize,
}

impl GridDomain {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter("grid dimensions must be >= 1"));
        }
        Ok(Self { width, height })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }
}
