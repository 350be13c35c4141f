//! The real scalar abstraction shared by every routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, NumAssignOps};

/// A real floating point scalar.
///
/// Implemented for `f32` and `f64`. All factorizations need square roots
/// (Householder reflectors) and a unit roundoff, so exact rational types are
/// not supported.
pub trait Real: Float + NumAssignOps + Debug + Display + LowerExp + Default + Send + Sync + 'static {
    /// Lossy conversion from `f64`, used by generators and file readers.
    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).unwrap_or_else(Self::nan)
    }

    /// Lossy conversion to `f64`.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        Self::from_f64_lossy(n as f64)
    }
}

impl<T> Real for T where T: Float + NumAssignOps + Debug + Display + LowerExp + Default + Send + Sync + 'static {}

/// Pivot threshold `n * eps * scale` used to flag singular factorizations.
#[inline]
pub(crate) fn singularity_threshold<T: Real>(n: usize, scale: T) -> T {
    T::from_usize(n) * T::epsilon() * scale
}
