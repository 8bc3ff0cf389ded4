//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt;

use nalgebra::{Complex, RealField};
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point type the walk, spin and pulse code is written against.
///
/// Implemented for `f32` and `f64`. Thresholds quoted in the API are given for
/// `f64`; [`Real::tolerance`] widens them to something meaningful for coarser
/// types.
pub trait Real:
    RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + fmt::Display + fmt::LowerExp
{
    /// Converts an `f64` constant into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// `base` or a few hundred ulps at unity, whichever is larger.
    fn tolerance(base: f64) -> Self {
        let eps = Self::default_epsilon().to_f64().unwrap_or(f64::EPSILON);
        Self::lit(base.max(512.0 * eps))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `e^{i phi}`.
pub(crate) fn cis<T: Real>(phi: T) -> Complex<T> {
    Complex::new(phi.cos(), phi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_is_not_below_precision() {
        assert_eq!(f64::tolerance(1e-9), 1e-9);
        assert_eq!(f64::tolerance(1e-12), 1e-12);
        assert!(f32::tolerance(1e-12) > 1e-5);
    }
}
