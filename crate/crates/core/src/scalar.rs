//! Floating-point abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumCast};

/// Real scalar the toolkit is generic over: `f32` or `f64`.
///
/// Reductions that feed statistics (sums over pairs, periodogram terms) are
/// carried out in `f64` regardless of `Self`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + FromStr + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts a literal; panics only for values unrepresentable in `Self`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal out of range for scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("count out of range for scalar type")
    }

    /// A value strictly below `self` (for `self > 0`), used to keep
    /// half-open interval containment after rounding.
    #[inline]
    fn step_down(self) -> Self {
        if self <= Self::zero() {
            return Self::zero();
        }
        let down = self - self * Self::epsilon();
        if down < self {
            down
        } else {
            self - Self::min_positive_value()
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Maps an `f64` drawn from `[0, 1)` into `[0, 1)` of `T`.
///
/// Narrowing to `f32` can round values just below one up to exactly one.
#[inline]
pub(crate) fn unit_interval<T: Scalar>(u: f64) -> T {
    let v = T::lit(u);
    if v >= T::one() {
        T::one().step_down()
    } else {
        v
    }
}

/// Wraps any finite value into `[0, extent)`.
#[inline]
pub(crate) fn wrap_into<T: Scalar>(v: T, extent: T) -> T {
    let mut r = v % extent;
    if r < T::zero() {
        r = r + extent;
    }
    if r >= extent {
        T::zero()
    } else {
        r
    }
}
