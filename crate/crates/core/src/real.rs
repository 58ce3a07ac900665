//! Scalar abstraction for amplitudes.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real field used for the parts of every complex amplitude: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Magnitude at or below which an amplitude is treated as floating-point dust and dropped.
    fn dust() -> Self;

    /// Converts an `f64` constant (tolerance, threshold) into this type.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }
}

impl Real for f64 {
    fn dust() -> Self {
        1e-15
    }
}

impl Real for f32 {
    fn dust() -> Self {
        1e-7
    }
}
