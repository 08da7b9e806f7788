use alloc::vec::Vec;

use super::{Blur, MassMatrix};
use crate::error::{Error, Result};
use crate::sparse::{Cholesky, SparseOperator};

/// One (or a few) implicit heat steps with a prefactored system.
///
/// Applying solves `(A + dt L) u = A v`, the symmetric form of
/// `u = (I + dt A^{-1} L)^{-1} v`. Constants are preserved exactly because
/// `L 1 = 0`, and the `A`-weighted sum of the signal is conserved.
#[derive(Debug, Clone)]
pub struct DiffusionOperator {
    factor: Cholesky,
    mass: MassMatrix,
    time: f64,
    steps: usize,
}

/// Prefactors `A + dt L` for a single implicit step of length `dt`.
pub fn heat_step(laplacian: &SparseOperator, mass: &MassMatrix, dt: f64) -> Result<DiffusionOperator> {
    heat_step_multi(laplacian, mass, dt, 1)
}

/// `steps` implicit substeps of length `dt / steps` sharing one factorization.
pub fn heat_step_multi(
    laplacian: &SparseOperator,
    mass: &MassMatrix,
    dt: f64,
    steps: usize,
) -> Result<DiffusionOperator> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter("diffusion time must be positive"));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("step count must be >= 1"));
    }
    if laplacian.dim() != mass.len() {
        return Err(Error::ShapeMismatch { expected: laplacian.dim(), found: mass.len() });
    }
    let system = SparseOperator::diagonal(mass.diagonal()).add_scaled(dt / steps as f64, laplacian);
    let factor = Cholesky::factor(&system)?;
    Ok(DiffusionOperator { factor, mass: mass.clone(), time: dt, steps })
}

impl DiffusionOperator {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn mass(&self) -> &MassMatrix {
        &self.mass
    }

    pub fn factor_nnz(&self) -> usize {
        self.factor.factor_nnz()
    }
}

impl Blur for DiffusionOperator {
    fn len(&self) -> usize {
        self.mass.len()
    }

    fn blur_channel(&self, input: &[f64], output: &mut [f64]) {
        let a = self.mass.diagonal();
        output.copy_from_slice(input);
        let mut work = Vec::with_capacity(input.len());
        for _ in 0..self.steps {
            for (o, m) in output.iter_mut().zip(a) {
                *o *= m;
            }
            self.factor.solve_in_place(output, &mut work);
        }
    }
}
