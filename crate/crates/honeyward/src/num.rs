//! Floating-point scalar abstraction for the numeric kernel.
//!
//! Entropy, crack-time, and flatness arithmetic are generic over [`Real`] so
//! they can run at `f32` or `f64`. Everything wired into I/O uses the
//! concrete [`crate::Scalar`] alias.

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: f32 or f64.
pub trait Real: Float + FromPrimitive + std::fmt::Debug + std::fmt::Display {
    /// Lossless-enough conversion from f64 constants.
    fn from_f64_const(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
