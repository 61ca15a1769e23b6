//! Floating point abstraction shared by the physics modules.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the kinematics can be evaluated in: `f32` or `f64`.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn clamp_to(self, lo: Self, hi: Self) -> Self {
        self.max(lo).min(hi)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for [`Scalar::lit`].
#[inline]
pub(crate) fn c<T: Scalar>(x: f64) -> T {
    T::lit(x)
}

/// Standard gravity, m/s².
pub const G0: f64 = 9.80665;
