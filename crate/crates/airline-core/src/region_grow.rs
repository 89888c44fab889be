//! Conditional region growing over edge pixels.
//!
//! A deterministic BFS flood fill that admits a frontier pixel only when its
//! orientation descriptor's dot product with the region's running mean
//! descriptor reaches the similarity threshold. Growth therefore stops at
//! corners, where the descriptor turns.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::PixelCoord;
use crate::orientation::DescriptorMap;
use crate::raster::BinaryMap;
use crate::scalar::Scalar;

/// Region-grow configuration: similarity threshold `T` and minimum emitted
/// region size `m` (strict: regions with more than `m` pixels are emitted).
#[derive(Debug, Clone, Copy)]
pub struct CrgConfig<S> {
    pub similarity_threshold: S,
    pub min_region_size: usize,
}

impl<S: Scalar> Default for CrgConfig<S> {
    fn default() -> Self {
        Self {
            similarity_threshold: S::from_f64_lossy(0.98),
            min_region_size: 15,
        }
    }
}

impl<S: Scalar> CrgConfig<S> {
    /// User-facing validation: `T` in (0, 1], `m >= 1`.
    pub fn validate(&self) -> Result<()> {
        if self.similarity_threshold <= S::zero() || self.similarity_threshold > S::one() {
            return Err(Error::Config(format!(
                "crg.threshold {} outside (0, 1]",
                self.similarity_threshold
            )));
        }
        if self.min_region_size == 0 {
            return Err(Error::Config("crg.min_pixels must be >= 1".into()));
        }
        Ok(())
    }
}

/// A grown group of edge pixels with its descriptor statistics.
#[derive(Debug, Clone)]
pub struct Region<S> {
    /// Distinct edge pixels forming one 8-connected component.
    pub pixels: Vec<PixelCoord>,
    /// L2 normalization of `raw_descriptor_sum` (zero vector if degenerate).
    pub mean_descriptor: Vec<S>,
    /// Sum of the member pixels' unit descriptors.
    pub raw_descriptor_sum: Vec<S>,
}

/// Dot product of two descriptors; unit or zero vectors expected, so a zero
/// vector against anything yields 0.
pub fn descriptor_similarity<S: Scalar>(d: &[S], avg: &[S]) -> S {
    d.iter()
        .zip(avg)
        .fold(S::zero(), |acc, (a, b)| acc + *a * *b)
}

fn normalized<S: Scalar>(v: &[S]) -> Vec<S> {
    let norm = v
        .iter()
        .fold(S::zero(), |acc, x| acc + *x * *x)
        .sqrt();
    if norm == S::zero() {
        v.to_vec()
    } else {
        v.iter().map(|x| *x / norm).collect()
    }
}

const NEIGHBORS_8: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Grows regions of similarly oriented edge pixels.
///
/// Seeds are scanned in row-major order over unused edge pixels; the
/// frontier is FIFO. A dequeued unused edge pixel joins the region iff its
/// descriptor's dot product with the normalized raw descriptor sum reaches
/// the threshold; it is then marked used and its 8 neighbors are enqueued.
/// Pixels failing the test stay unused and may join or seed later regions.
/// Regions strictly larger than `min_region_size` are emitted; smaller ones
/// are discarded but their pixels remain used.
pub fn conditional_region_grow<S: Scalar>(
    edges: &BinaryMap,
    desc: &DescriptorMap<S>,
    cfg: &CrgConfig<S>,
) -> Result<Vec<Region<S>>> {
    if edges.dimensions() != desc.dimensions() {
        return Err(Error::Contract(format!(
            "edge map is {}x{} but descriptor map is {}x{}",
            edges.width(),
            edges.height(),
            desc.width(),
            desc.height()
        )));
    }
    let (w, h) = edges.dimensions();
    let mut used = vec![false; w * h];
    let mut regions = Vec::new();
    let mut frontier: VecDeque<PixelCoord> = VecDeque::new();

    let enqueue_neighbors =
        |p: PixelCoord, used: &[bool], frontier: &mut VecDeque<PixelCoord>| {
            for (dx, dy) in NEIGHBORS_8 {
                let x = p.x as i64 + dx;
                let y = p.y as i64 + dy;
                if x < 0 || x >= w as i64 || y < 0 || y >= h as i64 {
                    continue;
                }
                let (x, y) = (x as usize, y as usize);
                // Non-edge neighbors carry zero descriptors and can never
                // pass the test, so they are not enqueued.
                if edges.get(x, y) && !used[y * w + x] {
                    frontier.push_back(PixelCoord::new(x, y));
                }
            }
        };

    for sy in 0..h {
        for sx in 0..w {
            if !edges.get(sx, sy) || used[sy * w + sx] {
                continue;
            }
            let seed = PixelCoord::new(sx, sy);
            used[sy * w + sx] = true;
            let mut pixels = vec![seed];
            let mut raw_sum: Vec<S> = desc.descriptor(sx, sy).to_vec();
            frontier.clear();
            enqueue_neighbors(seed, &used, &mut frontier);

            while let Some(p) = frontier.pop_front() {
                if used[p.y * w + p.x] {
                    continue;
                }
                let d = desc.descriptor(p.x, p.y);
                let similarity = descriptor_similarity(d, &normalized(&raw_sum));
                if similarity >= cfg.similarity_threshold {
                    used[p.y * w + p.x] = true;
                    for (ch, v) in d.iter().enumerate() {
                        raw_sum[ch] = raw_sum[ch] + *v;
                    }
                    pixels.push(p);
                    enqueue_neighbors(p, &used, &mut frontier);
                }
            }

            if pixels.len() > cfg.min_region_size {
                let mean_descriptor = normalized(&raw_sum);
                regions.push(Region {
                    pixels,
                    mean_descriptor,
                    raw_descriptor_sum: raw_sum,
                });
            }
        }
    }
    Ok(regions)
}
