//! Floating-point scalar abstraction for the numeric side of the library.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type used for E-function values and transforms (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Default + Send + Sync + 'static
{
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real type")
    }

    fn from_count(v: u64) -> Self {
        Self::from_u64(v).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
