//! Raster primitives shared by every stage: image containers, thresholding,
//! Bresenham rasterization, and Euclidean-disk morphological dilation.

pub mod io;

use crate::error::{Error, Result};
use crate::geometry::{LineSegment, PixelCoord};
use crate::scalar::Scalar;

/// 2D scalar raster with intensities in `[0, 1]`, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage<S> {
    width: usize,
    height: usize,
    data: Vec<S>,
}

impl<S: Scalar> GrayImage<S> {
    /// Builds an image from row-major data, validating length and range.
    pub fn new(width: usize, height: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Contract(format!(
                "image data length {} does not match {}x{}",
                data.len(),
                width,
                height
            )));
        }
        if data.iter().any(|v| *v < S::zero() || *v > S::one()) {
            return Err(Error::Contract(
                "image intensities must lie in [0, 1]".into(),
            ));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Constant-valued image; `value` must lie in `[0, 1]`.
    pub fn filled(width: usize, height: usize, value: S) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub(crate) fn from_raw_unchecked(width: usize, height: usize, data: Vec<S>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> S {
        self.data[y * self.width + x]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }
}

/// 2D boolean raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::Contract(format!(
                "bit length {} does not match {}x{}",
                bits.len(),
                width,
                height
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn as_bits(&self) -> &[bool] {
        &self.bits
    }

    /// Coordinates of all true pixels in row-major order.
    pub fn true_pixels(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        self.bits.iter().enumerate().filter_map(move |(i, b)| {
            b.then(|| PixelCoord::new(i % self.width, i / self.width))
        })
    }

    /// Quarter-turn rotation; a W x H map becomes H x W.
    pub fn rotate90(&self) -> BinaryMap {
        let (w, h) = (self.width, self.height);
        let mut out = BinaryMap::new(h, w);
        for yp in 0..w {
            for xp in 0..h {
                // dest(x', y') = src(y', H-1-x')
                if self.get(yp, h - 1 - xp) {
                    out.set(xp, yp, true);
                }
            }
        }
        out
    }
}

/// Inclusive threshold: output bit is true iff intensity >= `t`.
pub fn threshold_map<S: Scalar>(img: &GrayImage<S>, t: S) -> BinaryMap {
    let bits = img.as_slice().iter().map(|v| *v >= t).collect();
    BinaryMap {
        width: img.width(),
        height: img.height(),
        bits,
    }
}

/// Per-row half-widths of the integer-lattice disk dx^2 + dy^2 <= r^2.
pub(crate) fn disk_row_spans(r: u32) -> Vec<(i64, i64)> {
    let r = i64::from(r);
    (-r..=r)
        .map(|dy| {
            let max_dx = ((r * r - dy * dy) as f64).sqrt().floor() as i64;
            (dy, max_dx)
        })
        .collect()
}

/// Morphological dilation by the Euclidean disk of integer radius `r`.
///
/// Output bit (x, y) is true iff some input true bit (x', y') satisfies
/// (x-x')^2 + (y-y')^2 <= r^2; `r = 0` returns the input unchanged.
pub fn dilate_disk(map: &BinaryMap, r: u32) -> BinaryMap {
    if r == 0 {
        return map.clone();
    }
    let (w, h) = (map.width as i64, map.height as i64);
    let spans = disk_row_spans(r);
    let mut out = BinaryMap::new(map.width, map.height);
    for p in map.true_pixels() {
        let (px, py) = (p.x as i64, p.y as i64);
        for (dy, max_dx) in &spans {
            let y = py + dy;
            if y < 0 || y >= h {
                continue;
            }
            let x0 = (px - max_dx).max(0) as usize;
            let x1 = (px + max_dx).min(w - 1) as usize;
            let row = y as usize * map.width;
            out.bits[row + x0..=row + x1].fill(true);
        }
    }
    out
}

/// Rasterizes a segment as a 1-pixel-wide 8-connected digital line.
///
/// Endpoints are rounded to the nearest pixel before tracing; the traced
/// pixel set is independent of endpoint order, and off-raster portions are
/// clipped.
pub fn rasterize_segment<S: Scalar>(
    seg: &LineSegment<S>,
    width: usize,
    height: usize,
) -> BinaryMap {
    let mut map = BinaryMap::new(width, height);
    rasterize_segment_into(seg, &mut map);
    map
}

/// Rasterizes into an existing map (used to build union rasters).
pub fn rasterize_segment_into<S: Scalar>(seg: &LineSegment<S>, map: &mut BinaryMap) {
    let round = |v: S| v.to_f64_lossy().round() as i64;
    let mut a = (round(seg.p1.x), round(seg.p1.y));
    let mut b = (round(seg.p2.x), round(seg.p2.y));
    // Canonical endpoint order makes the traced set symmetric in a <-> b.
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let (w, h) = (map.width as i64, map.height as i64);
    let (mut x, mut y) = a;
    let (x1, y1) = b;
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if x >= 0 && x < w && y >= 0 && y < h {
            map.set(x as usize, y as usize, true);
        }
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}
