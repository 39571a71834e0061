//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar: `f32`, `f64`, or an extended type such as `twofloat::TwoFloat`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every supported scalar can represent finite `f64` values.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in scalar")
    }

    /// Lossy conversion for reporting and error messages.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}
