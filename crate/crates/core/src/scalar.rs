//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `4π²`, the total curvature budget on the hemisphere.
    #[inline]
    fn four_pi_sq() -> Self {
        Self::c(4.0) * Self::PI() * Self::PI()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Volume of the unit 4-sphere, `8π²/3`.
pub fn vol_s4<T: Real>() -> T {
    T::c(8.0) * T::PI() * T::PI() / T::c(3.0)
}

/// Volume of the upper hemisphere, `4π²/3`.
pub fn vol_s4_plus<T: Real>() -> T {
    T::c(4.0) * T::PI() * T::PI() / T::c(3.0)
}

/// Volume of the unit 3-sphere, `2π²`.
pub fn vol_s3<T: Real>() -> T {
    T::c(2.0) * T::PI() * T::PI()
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}
