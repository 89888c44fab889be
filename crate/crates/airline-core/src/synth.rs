//! Synthetic scenes with known ground-truth segments and perfect edge maps.
//!
//! Scenes are generated by seeded rejection sampling, so detection quality
//! can be scored against exact ground truth without external datasets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{segment_distance, LineSegment, Point2};
use crate::raster::{rasterize_segment_into, BinaryMap, GrayImage};
use crate::scalar::Scalar;

/// A generated scene: ground-truth segments plus their perfect rendering.
#[derive(Debug, Clone)]
pub struct SynthScene<S> {
    pub width: usize,
    pub height: usize,
    pub segments: Vec<LineSegment<S>>,
    /// Bresenham rendering of all segments with value 1.0.
    pub edge_map: GrayImage<S>,
    pub seed: u64,
}

const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

/// Generates `count` uniformly random segments of length at least `min_len`
/// whose pairwise distance is at least `separation`, fully inside the
/// raster. Deterministic for a fixed seed.
pub fn generate_scene<S: Scalar>(
    width: usize,
    height: usize,
    count: usize,
    seed: u64,
    min_len: f64,
    separation: f64,
) -> Result<SynthScene<S>> {
    if count == 0 {
        return Err(Error::Config("scene needs at least one segment".into()));
    }
    if width < 2 || height < 2 {
        return Err(Error::Config(format!(
            "raster {width}x{height} too small for scene generation"
        )));
    }
    // Geometry is sampled in f64 so scenes are identical across scalar types.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed: Vec<LineSegment<f64>> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while placed.len() < count {
        if attempts >= MAX_PLACEMENT_ATTEMPTS {
            return Err(Error::Capacity(format!(
                "placed only {} of {count} segments after {MAX_PLACEMENT_ATTEMPTS} attempts; \
                 request fewer segments or a larger raster",
                placed.len()
            )));
        }
        attempts += 1;
        let p1 = Point2::new(
            rng.gen_range(0.0..=(width - 1) as f64),
            rng.gen_range(0.0..=(height - 1) as f64),
        );
        let p2 = Point2::new(
            rng.gen_range(0.0..=(width - 1) as f64),
            rng.gen_range(0.0..=(height - 1) as f64),
        );
        if p1.distance(p2) < min_len {
            continue;
        }
        let candidate = LineSegment::from_endpoints(p1, p2);
        if placed
            .iter()
            .any(|s| segment_distance(s, &candidate) < separation)
        {
            continue;
        }
        placed.push(candidate);
    }

    let mut raster = BinaryMap::new(width, height);
    for seg in &placed {
        rasterize_segment_into(seg, &mut raster);
    }
    let data: Vec<S> = raster
        .as_bits()
        .iter()
        .map(|b| if *b { S::one() } else { S::zero() })
        .collect();
    let edge_map = GrayImage::new(width, height, data)?;
    let segments = placed
        .iter()
        .map(|s| {
            LineSegment::from_endpoints(
                Point2::new(S::from_f64_lossy(s.p1.x), S::from_f64_lossy(s.p1.y)),
                Point2::new(S::from_f64_lossy(s.p2.x), S::from_f64_lossy(s.p2.y)),
            )
        })
        .collect();
    Ok(SynthScene {
        width,
        height,
        segments,
        edge_map,
        seed,
    })
}

/// Outcome of matching detections against a scene's ground truth.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecoveryStats {
    /// Ground-truth segments matched within both tolerances, over all
    /// ground-truth segments.
    pub recovered_fraction: f64,
    /// Mean endpoint distance over recovered pairs, in pixels.
    pub mean_endpoint_error: f64,
    /// Mean undirected angle error over recovered pairs, in degrees.
    pub mean_angle_error_deg: f64,
    pub recovered: usize,
    pub ground_truth: usize,
    pub detected: usize,
}

/// Symmetric endpoint distance: smaller (over both endpoint pairings) mean
/// of the two endpoint distances.
fn endpoint_distance<S: Scalar>(a: &LineSegment<S>, b: &LineSegment<S>) -> f64 {
    let d = |p: Point2<S>, q: Point2<S>| p.distance(q).to_f64_lossy();
    let straight = (d(a.p1, b.p1) + d(a.p2, b.p2)) / 2.0;
    let swapped = (d(a.p1, b.p2) + d(a.p2, b.p1)) / 2.0;
    straight.min(swapped)
}

/// Greedy one-to-one matching of detections to ground truth by smallest
/// symmetric endpoint distance; a pair counts as recovered when it is within
/// both the endpoint and the angle tolerance.
pub fn score_recovery<S: Scalar>(
    detected: &[LineSegment<S>],
    scene: &SynthScene<S>,
    endpoint_tol: f64,
    angle_tol_deg: f64,
) -> RecoveryStats {
    let gt = &scene.segments;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(gt.len() * detected.len());
    for (gi, g) in gt.iter().enumerate() {
        for (di, d) in detected.iter().enumerate() {
            pairs.push((endpoint_distance(d, g), gi, di));
        }
    }
    pairs.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut gt_used = vec![false; gt.len()];
    let mut det_used = vec![false; detected.len()];
    let mut recovered = 0usize;
    let mut endpoint_sum = 0.0;
    let mut angle_sum = 0.0;
    for (dist, gi, di) in pairs {
        if gt_used[gi] || det_used[di] {
            continue;
        }
        gt_used[gi] = true;
        det_used[di] = true;
        let angle = detected[di].angle_to(&gt[gi]).to_f64_lossy();
        if dist <= endpoint_tol && angle <= angle_tol_deg {
            recovered += 1;
            endpoint_sum += dist;
            angle_sum += angle;
        }
    }
    RecoveryStats {
        recovered_fraction: if gt.is_empty() {
            0.0
        } else {
            recovered as f64 / gt.len() as f64
        },
        mean_endpoint_error: if recovered > 0 {
            endpoint_sum / recovered as f64
        } else {
            0.0
        },
        mean_angle_error_deg: if recovered > 0 {
            angle_sum / recovered as f64
        } else {
            0.0
        },
        recovered,
        ground_truth: gt.len(),
        detected: detected.len(),
    }
}
