//! Scalar types accepted by the tropical kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type usable as a coordinate: `f32` or `f64`.
///
/// Exact real arithmetic is replaced by a tie tolerance: two values are
/// considered equal when they differ by at most `tie_eps() * max(1, |a|, |b|)`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Sum + Send + Sync + 'static
{
    /// Relative tolerance used to decide that a maximum is attained twice.
    fn tie_eps() -> Self;

    /// Converts an `f64` literal, panicking only if the type cannot hold it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Scalar for f64 {
    fn tie_eps() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn tie_eps() -> Self {
        1e-4
    }
}

/// `true` when `a` and `b` agree up to the scaled tie tolerance.
#[inline]
pub fn tied<T: Scalar>(a: T, b: T) -> bool {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() <= T::tie_eps() * scale
}
