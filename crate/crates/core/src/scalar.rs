//! Scalar abstraction for the geometric primitives.
//!
//! The disc and bidisc metrics are written once over [`Real`] and
//! instantiated for `f64` (the default used by the rest of the crate)
//! and `f32`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar usable by the disc geometry: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    fn lit(x: f64) -> Self;

    /// Smallest positive distance to the unit circle that the metric
    /// formulas are evaluated at.
    fn boundary_floor() -> Self {
        Self::epsilon() / Self::lit(2.0)
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
}

/// Squared modulus without the intermediate square root.
#[inline]
pub(crate) fn abs_sq<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}
