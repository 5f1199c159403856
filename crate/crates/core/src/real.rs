//! Scalar abstraction for the generic math kernels.
//!
//! Everything in [`crate::rate`] and [`crate::variational`] is written
//! against this trait so the same code runs at `f32` or `f64` precision.
//! The crate-root aliases pin `f64`.

use std::fmt;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar with the few extras the rate functions need
/// beyond `num_traits::Float`.
pub trait Real:
    Float + FromPrimitive + NumAssign + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Natural log of the gamma function.
    fn lgamma(self) -> Self;

    fn from_f(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable")
    }

    fn from_count(x: u64) -> Self {
        Self::from_u64(x).expect("u64 count not representable")
    }
}

impl Real for f64 {
    fn lgamma(self) -> Self {
        statrs::function::gamma::ln_gamma(self)
    }
}

impl Real for f32 {
    fn lgamma(self) -> Self {
        statrs::function::gamma::ln_gamma(self as f64) as f32
    }
}
