use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::Vec3;

/// Which kind of domain element a signal's values are attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Vertex,
    Face,
    Pixel,
    Point,
}

/// Per-element vector values, stored element-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    kind: ElementKind,
    channels: usize,
    values: Vec<f64>,
}

impl Signal {
    pub fn new(kind: ElementKind, channels: usize, values: Vec<f64>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidParameter("signal channel count must be >= 1"));
        }
        if !values.len().is_multiple_of(channels) {
            return Err(Error::ShapeMismatch {
                expected: values.len() / channels * channels + channels,
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self { kind, channels, values })
    }

    pub fn scalar(kind: ElementKind, values: Vec<f64>) -> Result<Self> {
        Self::new(kind, 1, values)
    }

    pub fn from_vectors(kind: ElementKind, vectors: &[Vec3]) -> Result<Self> {
        Self::new(kind, 3, vectors.iter().flatten().copied().collect())
    }

    pub fn constant(kind: ElementKind, len: usize, value: &[f64]) -> Self {
        let mut values = Vec::with_capacity(len * value.len());
        for _ in 0..len {
            values.extend_from_slice(value);
        }
        Self { kind, channels: value.len().max(1), values }
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, element: usize) -> &[f64] {
        &self.values[element * self.channels..(element + 1) * self.channels]
    }

    pub fn vec3(&self, element: usize) -> Vec3 {
        let v = self.get(element);
        [v[0], v[1], v[2]]
    }

    pub fn to_vec3s(&self) -> Vec<Vec3> {
        (0..self.len()).map(|e| self.vec3(e)).collect()
    }

    /// Copies one channel out as a contiguous vector.
    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.values.iter().skip(c).step_by(self.channels).copied().collect()
    }

    /// Largest absolute difference to another signal of the same shape.
    pub fn max_abs_diff(&self, other: &Signal) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Reorders elements: element `i` of the result is element `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Signal {
        let mut values = Vec::with_capacity(self.values.len());
        for &e in order {
            values.extend_from_slice(self.get(e));
        }
        Signal { kind: self.kind, channels: self.channels, values }
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::ShapeMismatch { expected, found: self.len() });
        }
        Ok(())
    }

    /// Errors unless every element is a unit 3-vector within `tol`.
    pub fn check_unit(&self, tol: f64) -> Result<()> {
        if self.channels != 3 {
            return Err(Error::ChannelMismatch { expected: 3, found: self.channels });
        }
        for e in 0..self.len() {
            let n = crate::math::norm(self.vec3(e));
            if (n - 1.0).abs() > tol {
                return Err(Error::NonUnitVector { index: e, norm: n });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        let err = Signal::scalar(ElementKind::Vertex, alloc::vec![0.0, f64::NAN]).unwrap_err();
        assert_eq!(err, Error::NonFiniteValue { index: 1 });
    }

    #[test]
    fn rejects_ragged_values() {
        assert!(Signal::new(ElementKind::Face, 3, alloc::vec![0.0; 4]).is_err());
    }

    #[test]
    fn channel_extraction() {
        let s = Signal::new(ElementKind::Pixel, 2, alloc::vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.channel(1), alloc::vec![2.0, 4.0]);
        assert_eq!(s.permuted(&[1, 0]).values(), &[3.0, 4.0, 1.0, 2.0]);
    }
}
