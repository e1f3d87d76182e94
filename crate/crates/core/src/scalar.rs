//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// All algorithms are written against this trait. Acceptance tolerances are
/// calibrated for `f64`; `f32` works but only at its own precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance under which two frequencies are considered equal.
    fn freq_tol() -> Self;

    /// Converts an `f64` literal; panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn freq_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    #[inline]
    fn freq_tol() -> Self {
        1e-4
    }
}
