//! Laplacian/mass pairs for each domain kind and the linear blur `T` they
//! induce through one implicit heat step.

mod grid;
mod heat;
mod laplacian;

use alloc::vec::Vec;

pub use grid::{build_grid_blur, GridBlur};
pub use heat::{heat_step, heat_step_multi, DiffusionOperator};
pub use laplacian::{build_cotan_laplacian, build_face_dual_laplacian, build_knn_graph_laplacian, KnnLaplacian};

use crate::error::{Error, Result};
use crate::geom::Signal;
use crate::sparse::SparseOperator;

/// A linear blur acting independently on each channel of a signal.
pub trait Blur: Sync {
    /// Number of domain elements the blur acts on.
    fn len(&self) -> usize;

    /// Blurs one scalar channel; `input` and `output` have length `len()`.
    fn blur_channel(&self, input: &[f64], output: &mut [f64]);

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Blurs every channel of `signal`.
    fn apply(&self, signal: &Signal) -> Result<Signal> {
        signal.check_len(self.len())?;
        let n = self.len();
        let ch = signal.channels();
        let mut out = alloc::vec![0.0; n * ch];
        let mut buf_in = alloc::vec![0.0; n];
        let mut buf_out = alloc::vec![0.0; n];
        for c in 0..ch {
            for (e, v) in buf_in.iter_mut().enumerate() {
                *v = signal.values()[e * ch + c];
            }
            self.blur_channel(&buf_in, &mut buf_out);
            for (e, v) in buf_out.iter().enumerate() {
                out[e * ch + c] = *v;
            }
        }
        Signal::new(signal.kind(), ch, out)
    }
}

impl<B: Blur + ?Sized> Blur for &B {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn blur_channel(&self, input: &[f64], output: &mut [f64]) {
        (**self).blur_channel(input, output)
    }
}

/// The identity blur (a delta spatial kernel).
#[derive(Debug, Clone, Copy)]
pub struct IdentityBlur(pub usize);

impl Blur for IdentityBlur {
    fn len(&self) -> usize {
        self.0
    }

    fn blur_channel(&self, input: &[f64], output: &mut [f64]) {
        output.copy_from_slice(input);
    }
}

/// Positive diagonal mass (quadrature weight per element).
#[derive(Debug, Clone, PartialEq)]
pub struct MassMatrix(Vec<f64>);

impl MassMatrix {
    pub fn new(diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidParameter("mass matrix entries must be positive and finite"));
        }
        Ok(Self(diagonal))
    }

    pub fn identity(n: usize) -> Self {
        Self(alloc::vec![1.0; n])
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_i A_ii v_i`.
    pub fn weighted_sum(&self, v: &[f64]) -> f64 {
        self.0.iter().zip(v).map(|(a, x)| a * x).sum()
    }
}

/// A Laplacian with its mass matrix.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub laplacian: SparseOperator,
    pub mass: MassMatrix,
}
