//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, LowerExp};

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable throughout the crate (`f32`, `f64`).
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + LowerExp + Debug + Default {}

impl<T> Real for T where T: RealField + Copy + FromPrimitive + ToPrimitive + LowerExp + Debug + Default {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn infinity<T: Real>() -> T {
    lit(f64::INFINITY)
}

#[inline]
pub fn is_finite<T: Real>(x: T) -> bool {
    to_f64(x).is_finite()
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}
