//! Scalar abstraction. Every numeric kernel in this crate is generic over
//! [`Real`]; the crate root exports `f64` aliases for the common case.

use rand::distr::uniform::SampleUniform;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + SampleUniform
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` constant or file value into the scalar type.
#[inline]
pub fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 value converts to scalar")
}

/// Convert a count into the scalar type.
#[inline]
pub fn count<R: Real>(n: usize) -> R {
    R::from_usize(n).expect("count converts to scalar")
}
