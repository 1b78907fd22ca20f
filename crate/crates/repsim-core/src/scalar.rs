//! Generic scalar abstraction for the closed-form model kernels.
//!
//! The rate, fidelity and emission formulas are polymorphic over the
//! floating-point type; `f64` aliases for the common case live at the
//! crate root. Simulation and configuration code is `f64`-only.

use std::fmt;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("finite f64 constant")
}
