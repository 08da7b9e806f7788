use crate::diffusion::Blur;
use crate::error::{Error, Result};

/// The unsharp mask `v -> (1 + gain) v - gain T(v)` built on a blur `T`.
#[derive(Debug, Clone)]
pub struct Unsharp<B> {
    inner: B,
    gain: f64,
}

/// Wraps `blur` in an unsharp mask with the given nonnegative gain.
pub fn substitute_kernel_unsharp<B: Blur>(blur: B, gain: f64) -> Result<Unsharp<B>> {
    if !(gain >= 0.0) || !gain.is_finite() {
        return Err(Error::InvalidParameter("unsharp gain must be nonnegative"));
    }
    Ok(Unsharp { inner: blur, gain })
}

impl<B> Unsharp<B> {
    pub fn gain(&self) -> f64 {
        self.gain
    }
}

impl<B: Blur> Blur for Unsharp<B> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn blur_channel(&self, input: &[f64], output: &mut [f64]) {
        self.inner.blur_channel(input, output);
        for (o, v) in output.iter_mut().zip(input) {
            *o = (1.0 + self.gain) * v - self.gain * *o;
        }
    }
}
