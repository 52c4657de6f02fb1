use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the numerical core is written against: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// An absolute tolerance, widened to a few ulps for narrow types where
    /// the requested value is below machine resolution.
    #[inline]
    fn tol(v: f64) -> Self {
        let requested = Self::lit(v);
        let floor = Self::epsilon() * Self::lit(64.0);
        if requested < floor {
            floor
        } else {
            requested
        }
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) fn two<T: Scalar>() -> T {
    T::one() + T::one()
}

pub(crate) fn third<T: Scalar>() -> T {
    T::one() / T::lit(3.0)
}
