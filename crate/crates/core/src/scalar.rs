//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, NumCast};

/// Real floating-point scalar usable in matrices and selection kernels.
///
/// Implemented for `f32` and `f64`. The bound set is what the kernels need:
/// IEEE arithmetic through [`Float`], thread sharing for the blockwise
/// passes, and formatting for the text file formats.
pub trait Scalar:
    Float + Sum<Self> + Send + Sync + Debug + Display + LowerExp + Default + 'static
{
    /// Converts an `f64` literal or count into `Self`, rounding if needed.
    #[inline]
    fn of(value: f64) -> Self {
        <Self as NumCast>::from(value).expect("every f64 converts to a float scalar")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn of_count(value: usize) -> Self {
        Self::of(value as f64)
    }

    /// Widens to `f64` for I/O and reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        <f64 as NumCast>::from(self).expect("float scalars widen to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sequential dot product; the summation order is fixed so results are
/// reproducible regardless of how callers are scheduled.
#[inline]
pub(crate) fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = T::zero();
    for (&a, &b) in x.iter().zip(y) {
        acc = acc + a * b;
    }
    acc
}

#[inline]
pub(crate) fn norm2<T: Scalar>(x: &[T]) -> T {
    dot(x, x).sqrt()
}
