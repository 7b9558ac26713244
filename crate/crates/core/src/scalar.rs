//! Scalar abstraction shared by the floating-point geometry.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating point scalar usable by the geometric core: `f32` or `f64`.
pub trait Real: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from(x).expect("literal representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
