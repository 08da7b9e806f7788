use alloc::vec::Vec;

use super::space::{Manifold, RangeSpace};
use crate::error::{Error, Result};
use crate::math::exp;
use crate::rng::Rng;

/// Mean squared error of reconstructing random kernel bumps from their
/// values at the samples. Each trial draws a bump center and an evaluation
/// point uniformly on the manifold. Sphere targets are `exp((p.q - 1)/w)`,
/// box targets `exp(-|p - q|^2 / w^2)`. An infinite `target_width` gives
/// constant targets.
pub fn reconstruction_mse(space: &RangeSpace, target_width: f64, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required"));
    }
    if !(target_width > 0.0) {
        return Err(Error::InvalidParameter("target width must be positive"));
    }
    let dim = space.dim();
    let sphere = space.manifold() == Manifold::Sphere;
    let mut rng = Rng::new(seed);
    let draw = |rng: &mut Rng| -> Vec<f64> {
        if sphere {
            rng.unit_vector().to_vec()
        } else {
            (0..dim).map(|_| rng.uniform()).collect()
        }
    };
    let target = |center: &[f64], x: &[f64]| -> f64 {
        if target_width.is_infinite() {
            return 1.0;
        }
        if sphere {
            let d: f64 = center.iter().zip(x).map(|(a, b)| a * b).sum();
            exp((d - 1.0) / target_width)
        } else {
            let d2: f64 = center.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            exp(-d2 / (target_width * target_width))
        }
    };
    let mut weights = Vec::new();
    let mut total = 0.0;
    for _ in 0..trials {
        let center = draw(&mut rng);
        let p = draw(&mut rng);
        space.partition(&p, &mut weights);
        let approx: f64 = weights.iter().map(|&(i, w)| w * target(&center, space.sample(i))).sum();
        let err = approx - target(&center, &p);
        total += err * err;
    }
    Ok(total / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_targets_are_exact() {
        for rs in [RangeSpace::sphere_polyhedral(0, 0.3).unwrap(), RangeSpace::sphere_vmf(12, 0.3).unwrap(), RangeSpace::interval(3, 0.1).unwrap()] {
            assert!(reconstruction_mse(&rs, f64::INFINITY, 1000, 4).unwrap() < 1e-20);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let rs = RangeSpace::sphere_polyhedral(1, 0.3).unwrap();
        let a = reconstruction_mse(&rs, 0.3, 500, 11).unwrap();
        let b = reconstruction_mse(&rs, 0.3, 500, 11).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
