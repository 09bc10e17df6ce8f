//! Scalar abstraction shared by the closed forms and the simulator.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Every routine in this crate is written against this trait. Tolerances in
/// the test suites are calibrated for `f64`; `f32` is supported for the
/// closed forms but is not accurate enough to drive the simulator deep into
/// high-gain regimes.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar type.
    fn of(x: f64) -> Self;

    /// Converts a count into this scalar type.
    fn of_usize(n: usize) -> Self;

    /// Lossy conversion back to `f64`, used for reporting.
    fn to_f64_lossy(self) -> f64;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn of(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn of_usize(n: usize) -> Self {
                n as $t
            }

            #[inline]
            fn to_f64_lossy(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

/// `(-1)^n` as a scalar.
#[inline]
pub fn parity_sign<T: Scalar>(n: usize) -> T {
    if n.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}
