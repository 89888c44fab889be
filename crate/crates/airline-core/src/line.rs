//! Line parameterization by local edge voting, and the full detection
//! pipeline.
//!
//! Each grown region is summarized by its pixel center of mass, a tangent
//! elected by summing canonicalized pixel offsets, and endpoints at the
//! extreme signed projections of the region pixels onto the tangent.

use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::edge::{resolve_edge_probability, EdgeSourceConfig};
use crate::error::{Error, Result};
use crate::geometry::{canonical_sign, LineSegment, Point2};
use crate::orientation::{build_kernel_bank, compute_descriptors};
use crate::raster::{threshold_map, GrayImage};
use crate::region_grow::{conditional_region_grow, CrgConfig, Region};
use crate::scalar::Scalar;

/// Kernel-bank shape: channel count `N` and odd kernel size `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientConfig {
    pub channels: usize,
    pub kernel_size: usize,
}

impl Default for OrientConfig {
    fn default() -> Self {
        Self {
            channels: 6,
            kernel_size: 9,
        }
    }
}

/// Aggregated configuration of the detection pipeline.
#[derive(Debug, Clone)]
pub struct PipelineConfig<S> {
    pub edge: EdgeSourceConfig<S>,
    pub orient: OrientConfig,
    pub crg: CrgConfig<S>,
}

impl<S: Scalar> Default for PipelineConfig<S> {
    fn default() -> Self {
        Self {
            edge: EdgeSourceConfig::default(),
            orient: OrientConfig::default(),
            crg: CrgConfig::default(),
        }
    }
}

impl<S: Scalar> PipelineConfig<S> {
    pub fn validate(&self) -> Result<()> {
        self.edge.validate()?;
        self.crg.validate()?;
        if self.orient.channels < 2 {
            return Err(Error::Config(format!(
                "orient.channels {} must be >= 2",
                self.orient.channels
            )));
        }
        if self.orient.kernel_size < 3 || self.orient.kernel_size % 2 == 0 {
            return Err(Error::Config(format!(
                "orient.kernel_size {} must be odd and >= 3",
                self.orient.kernel_size
            )));
        }
        Ok(())
    }
}

/// Converts a grown region into a line segment.
///
/// The center is the arithmetic mean of the pixel coordinates. Every pixel
/// offset from the center casts a tangent vote after being sign-flipped into
/// a canonical half-plane — chosen along the axis of larger coordinate
/// spread so that votes reinforce for every line orientation — and the
/// normalized vote sum is the tangent. Endpoints sit at the minimum and
/// maximum signed projections of the pixels onto the tangent line.
pub fn parameterize_region<S: Scalar>(region: &Region<S>) -> Result<LineSegment<S>> {
    let pixels = &region.pixels;
    if pixels.len() < 2 {
        return Err(Error::DegenerateRegion(format!(
            "{} pixel(s); need at least 2",
            pixels.len()
        )));
    }
    let inv_n = S::one() / S::from_usize_lossy(pixels.len());
    let mut cx = S::zero();
    let mut cy = S::zero();
    for p in pixels {
        cx = cx + S::from_usize_lossy(p.x);
        cy = cy + S::from_usize_lossy(p.y);
    }
    let center = Point2::new(cx * inv_n, cy * inv_n);

    // Variance decides the canonical flip axis; flipping along the dominant
    // axis keeps votes from cancelling for near-axis-aligned regions.
    let mut var_x = S::zero();
    let mut var_y = S::zero();
    let offsets: Vec<Point2<S>> = pixels
        .iter()
        .map(|p| {
            let v = Point2::new(
                S::from_usize_lossy(p.x) - center.x,
                S::from_usize_lossy(p.y) - center.y,
            );
            var_x = var_x + v.x * v.x;
            var_y = var_y + v.y * v.y;
            v
        })
        .collect();
    let flip_along_x = var_x >= var_y;

    let mut vote = Point2::new(S::zero(), S::zero());
    for v in &offsets {
        let flipped = if flip_along_x {
            if v.x < S::zero() || (v.x == S::zero() && v.y < S::zero()) {
                v.scale(-S::one())
            } else {
                *v
            }
        } else if v.y < S::zero() || (v.y == S::zero() && v.x < S::zero()) {
            v.scale(-S::one())
        } else {
            *v
        };
        vote = vote.add(flipped);
    }
    let direction = vote
        .normalized()
        .map(canonical_sign)
        .ok_or_else(|| Error::DegenerateRegion("offset votes cancel to zero".into()))?;

    let mut t_min = S::infinity();
    let mut t_max = S::neg_infinity();
    for v in &offsets {
        let t = v.dot(direction);
        t_min = t_min.min(t);
        t_max = t_max.max(t);
    }
    Ok(LineSegment {
        p1: center.add(direction.scale(t_min)),
        p2: center.add(direction.scale(t_max)),
        center,
        direction,
    })
}

/// Wall-clock time spent in each pipeline stage.
#[derive(Debug, Clone, Copy, Default)]
pub struct StageTimings {
    /// Edge-probability production plus thresholding.
    pub edge: Duration,
    /// Kernel bank construction and descriptor computation.
    pub orientation: Duration,
    pub region_grow: Duration,
    pub parameterization: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.edge + self.orientation + self.region_grow + self.parameterization
    }
}

/// Segments plus per-stage timings.
#[derive(Debug, Clone)]
pub struct Detection<S> {
    pub segments: Vec<LineSegment<S>>,
    pub timings: StageTimings,
}

/// Runs the post-edge pipeline on an already resolved probability map.
pub fn detect_from_edge_map<S: Scalar>(
    edge_probability: &GrayImage<S>,
    cfg: &PipelineConfig<S>,
) -> Result<Detection<S>> {
    let start = Instant::now();
    let edges = threshold_map(edge_probability, cfg.edge.edge_threshold);
    let edge_time = start.elapsed();

    let start = Instant::now();
    let bank = build_kernel_bank(cfg.orient.channels, cfg.orient.kernel_size)?;
    let desc = compute_descriptors::<S>(&edges, &bank);
    let orientation = start.elapsed();

    let start = Instant::now();
    let regions = conditional_region_grow(&edges, &desc, &cfg.crg)?;
    let region_grow = start.elapsed();

    let start = Instant::now();
    let segments = regions
        .iter()
        .map(parameterize_region)
        .collect::<Result<Vec<_>>>()?;
    let parameterization = start.elapsed();

    Ok(Detection {
        segments,
        timings: StageTimings {
            edge: edge_time,
            orientation,
            region_grow,
            parameterization,
        },
    })
}

/// Full pipeline: edge source, threshold, orientation descriptors,
/// conditional region grow, and line parameterization.
///
/// Returns segments in region emission order; an image yielding no regions
/// produces an empty list.
pub fn detect_lines<S: Scalar>(
    img: &GrayImage<S>,
    cfg: &PipelineConfig<S>,
) -> Result<Vec<LineSegment<S>>> {
    Ok(detect_lines_timed(img, cfg)?.segments)
}

/// [`detect_lines`] with per-stage wall-clock timings.
pub fn detect_lines_timed<S: Scalar>(
    img: &GrayImage<S>,
    cfg: &PipelineConfig<S>,
) -> Result<Detection<S>> {
    let start = Instant::now();
    let probability = resolve_edge_probability(img, &cfg.edge)?;
    let resolve_time = start.elapsed();
    let mut detection = detect_from_edge_map(&probability, cfg)?;
    detection.timings.edge += resolve_time;
    Ok(detection)
}

/// One segment in the JSON interchange schema.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LineRecord {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

/// Serialized detection result for one image.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinesFile {
    pub image: String,
    pub width: usize,
    pub height: usize,
    pub lines: Vec<LineRecord>,
}

impl LinesFile {
    pub fn new<S: Scalar>(
        image: impl Into<String>,
        width: usize,
        height: usize,
        segments: &[LineSegment<S>],
    ) -> Self {
        let lines = segments
            .iter()
            .map(|s| LineRecord {
                x1: s.p1.x.to_f64_lossy(),
                y1: s.p1.y.to_f64_lossy(),
                x2: s.p2.x.to_f64_lossy(),
                y2: s.p2.y.to_f64_lossy(),
            })
            .collect();
        Self {
            image: image.into(),
            width,
            height,
            lines,
        }
    }

    pub fn segments<S: Scalar>(&self) -> Vec<LineSegment<S>> {
        self.lines
            .iter()
            .map(|l| {
                LineSegment::from_endpoints(
                    Point2::new(S::from_f64_lossy(l.x1), S::from_f64_lossy(l.y1)),
                    Point2::new(S::from_f64_lossy(l.x2), S::from_f64_lossy(l.y2)),
                )
            })
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut json = serde_json::to_string_pretty(self).expect("schema serializes");
        json.push('\n');
        std::fs::write(path, json).map_err(io_err)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_slice(&bytes).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            reason: format!("segment JSON: {e}"),
        })
    }
}
