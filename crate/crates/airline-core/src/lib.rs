//! Edge-to-line segment detection.
//!
//! The pipeline turns a grayscale frame into a list of line segments in four
//! stages:
//!
//! 1. **Edge source** – a per-pixel edge probability map, either from the
//!    built-in gradient detector or from an externally produced file
//!    ([`edge`]).
//! 2. **Orientation detection** – convolution with a bank of 1-pixel-wide
//!    line kernels, L2-normalized into per-pixel orientation descriptors
//!    ([`orientation`]).
//! 3. **Conditional region grow** – BFS flood fill over edge pixels gated by
//!    descriptor similarity against the region's running mean, so growth
//!    stops at corners ([`region_grow`]).
//! 4. **Line parameterization** – each region votes a tangent from its pixel
//!    offsets; endpoints come from the extreme projections ([`line`]).
//!
//! [`metrics`] implements pixel-coverage line precision (`LP_r`) and the
//! endpoint match criterion; [`synth`] generates seeded synthetic scenes
//! with exact ground truth for oracle-grade end-to-end checks.
//!
//! All numeric code is generic over the [`scalar::Scalar`] floating-point
//! type; concrete aliases for `f32` and `f64` are exported at the crate
//! root.

pub mod edge;
pub mod error;
pub mod geometry;
pub mod line;
pub mod metrics;
pub mod orientation;
pub mod raster;
pub mod region_grow;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f32` pipeline types (throughput-oriented).
pub type GrayImageF32 = raster::GrayImage<f32>;
pub type LineSegmentF32 = geometry::LineSegment<f32>;
pub type PipelineConfigF32 = line::PipelineConfig<f32>;
pub type SynthSceneF32 = synth::SynthScene<f32>;

/// `f64` pipeline types (oracle- and metrics-oriented).
pub type GrayImageF64 = raster::GrayImage<f64>;
pub type LineSegmentF64 = geometry::LineSegment<f64>;
pub type PipelineConfigF64 = line::PipelineConfig<f64>;
pub type SynthSceneF64 = synth::SynthScene<f64>;
