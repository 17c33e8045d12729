//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All landscape, simulator and fitting code is written against [`Real`]
//! so it can run in `f32` for quick sweeps or `f64` for the tolerances the
//! validation suites pin. Integer pair counts stay exact and are only
//! converted to the scalar type at the last division.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar usable throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Machine epsilon lifted to a plain associated function so generic
    /// code does not have to spell `<F as Float>::epsilon()`.
    fn eps() -> Self {
        <Self as Float>::epsilon()
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + Serialize
        + DeserializeOwned
        + 'static
{
}

/// Converts an `f64` literal into `F`.
#[inline]
pub fn lit<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `F`.
#[inline]
pub fn count<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("count representable in scalar type")
}
