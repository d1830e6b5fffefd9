use std::f64::consts::FRAC_2_PI;

use crate::error::{Error, Result};

/// One-dimensional Cauchy-type kernel `2 / (π (u² + 1)²)`.
#[inline]
pub fn cauchy_kernel(u: f64) -> f64 {
    let t = u * u + 1.0;
    FRAC_2_PI / (t * t)
}

/// Product of [`cauchy_kernel`] over the coordinates of `x`.
pub fn product_kernel(x: &[f64]) -> f64 {
    x.iter().map(|&u| cauchy_kernel(u)).product()
}

/// Kernel density estimate at `x` with a single bandwidth `h` over
/// `patterns` (each of length `x.len()`).
pub fn kde<'a, I>(x: &[f64], patterns: I, h: f64) -> Result<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidSmoothing(format!("bandwidth must be positive, got {h}")));
    }
    let n = x.len();
    let mut count = 0usize;
    let mut sum = 0.0;
    let mut scaled = vec![0.0; n];
    for p in patterns {
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        for ((s, xi), pi) in scaled.iter_mut().zip(x).zip(p) {
            *s = (xi - pi) / h;
        }
        sum += product_kernel(&scaled);
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(sum / (count as f64 * h.powi(n as i32)))
}
