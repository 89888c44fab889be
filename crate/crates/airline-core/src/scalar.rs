//! Floating-point scalar abstraction for the whole pipeline.
//!
//! All image intensities, descriptors, and segment coordinates are generic
//! over [`Scalar`] so the same code runs in `f32` (throughput) or `f64`
//! (oracle-grade tests).

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64` (never fails for finite inputs).
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to scalar")
    }

    /// Conversion from a pixel count or coordinate.
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize converts to scalar")
    }

    /// Lossless widening used for reporting and serialization.
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
