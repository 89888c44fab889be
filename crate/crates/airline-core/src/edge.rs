//! Edge-probability sources and the masked BCE loss.
//!
//! The pipeline consumes a per-pixel edge probability map. It can come from
//! the built-in classical gradient detector (Gaussian smoothing + Sobel
//! magnitude) or from an externally produced file, which keeps the edge
//! stage pluggable.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::raster::{dilate_disk, io::load_gray, BinaryMap, GrayImage};
use crate::scalar::Scalar;

/// Which edge-probability source feeds the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSourceKind {
    /// Gaussian smoothing followed by Sobel gradient magnitude.
    Gradient,
    /// Externally supplied probability map (PGM/PNG, value/255).
    File,
}

/// Edge-source configuration.
#[derive(Debug, Clone)]
pub struct EdgeSourceConfig<S> {
    pub kind: EdgeSourceKind,
    /// Gaussian sigma in pixels; 0 disables smoothing.
    pub gradient_smoothing: S,
    /// Probability threshold applied before orientation detection.
    pub edge_threshold: S,
    /// Probability-map path; required when `kind` is `File`.
    pub file_path: Option<PathBuf>,
}

impl<S: Scalar> Default for EdgeSourceConfig<S> {
    fn default() -> Self {
        Self {
            kind: EdgeSourceKind::Gradient,
            gradient_smoothing: S::one(),
            edge_threshold: S::from_f64_lossy(0.5),
            file_path: None,
        }
    }
}

impl<S: Scalar> EdgeSourceConfig<S> {
    pub fn validate(&self) -> Result<()> {
        if self.edge_threshold < S::zero() || self.edge_threshold > S::one() {
            return Err(Error::Config(format!(
                "edge.threshold {} outside [0, 1]",
                self.edge_threshold
            )));
        }
        if self.gradient_smoothing < S::zero() {
            return Err(Error::Config(format!(
                "edge.sigma {} must be nonnegative",
                self.gradient_smoothing
            )));
        }
        if self.kind == EdgeSourceKind::File && self.file_path.is_none() {
            return Err(Error::Config(
                "edge.kind=file requires edge.file to be set".into(),
            ));
        }
        Ok(())
    }
}

/// Parameters of the masked BCE loss: mask weight `w` and dilation radius `r`.
#[derive(Debug, Clone, Copy)]
pub struct MaskedBceParams<S> {
    pub w: S,
    pub r: u32,
}

impl<S: Scalar> Default for MaskedBceParams<S> {
    fn default() -> Self {
        Self {
            w: S::from_f64_lossy(0.8),
            r: 5,
        }
    }
}

#[inline]
fn clamp_index(v: i64, max: usize) -> usize {
    v.clamp(0, max as i64 - 1) as usize
}

/// Separable Gaussian blur with replicate borders; sigma 0 is the identity.
fn gaussian_blur<S: Scalar>(img: &GrayImage<S>, sigma: S) -> GrayImage<S> {
    if sigma <= S::zero() {
        return img.clone();
    }
    let sigma = sigma.to_f64_lossy();
    let radius = (3.0 * sigma).ceil().max(1.0) as i64;
    let mut weights = Vec::with_capacity((2 * radius + 1) as usize);
    let mut sum = 0.0;
    for i in -radius..=radius {
        let w = (-((i * i) as f64) / (2.0 * sigma * sigma)).exp();
        weights.push(w);
        sum += w;
    }
    let weights: Vec<S> = weights
        .into_iter()
        .map(|w| S::from_f64_lossy(w / sum))
        .collect();

    let (w, h) = img.dimensions();
    let mut horiz = vec![S::zero(); w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = S::zero();
            for (k, wt) in weights.iter().enumerate() {
                let sx = clamp_index(x as i64 + k as i64 - radius, w);
                acc = acc + *wt * img.get(sx, y);
            }
            horiz[y * w + x] = acc;
        }
    }
    let mut out = vec![S::zero(); w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = S::zero();
            for (k, wt) in weights.iter().enumerate() {
                let sy = clamp_index(y as i64 + k as i64 - radius, h);
                acc = acc + *wt * horiz[sy * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    // Normalized nonnegative weights keep values inside [0, 1].
    GrayImage::from_raw_unchecked(w, h, out)
}

/// Classical edge detector: optional Gaussian smoothing, 3x3 Sobel gradient
/// magnitude, rescaled by the global maximum into `[0, 1]`.
///
/// An all-constant input yields an all-zero map.
pub fn gradient_edges<S: Scalar>(img: &GrayImage<S>, cfg: &EdgeSourceConfig<S>) -> GrayImage<S> {
    let smoothed = gaussian_blur(img, cfg.gradient_smoothing);
    let (w, h) = smoothed.dimensions();
    let at = |x: i64, y: i64| smoothed.get(clamp_index(x, w), clamp_index(y, h));
    let two = S::from_f64_lossy(2.0);

    let mut mag = vec![S::zero(); w * h];
    let mut max = S::zero();
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let gx = (at(x + 1, y - 1) + two * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + two * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + two * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + two * at(x, y - 1) + at(x + 1, y - 1));
            let m = (gx * gx + gy * gy).sqrt();
            if m > max {
                max = m;
            }
            mag[y as usize * w + x as usize] = m;
        }
    }
    if max > S::zero() {
        for v in &mut mag {
            *v = *v / max;
        }
    }
    GrayImage::from_raw_unchecked(w, h, mag)
}

/// Loads an externally produced edge-probability map, checking it matches
/// the working frame resolution.
pub fn load_edge_map<S: Scalar>(path: &Path, frame: (usize, usize)) -> Result<GrayImage<S>> {
    let map = load_gray(path)?;
    if map.dimensions() != frame {
        return Err(Error::Config(format!(
            "edge map {} is {}x{} but the frame is {}x{}",
            path.display(),
            map.width(),
            map.height(),
            frame.0,
            frame.1
        )));
    }
    Ok(map)
}

/// Resolves the configured edge source into a probability map for `img`.
pub fn resolve_edge_probability<S: Scalar>(
    img: &GrayImage<S>,
    cfg: &EdgeSourceConfig<S>,
) -> Result<GrayImage<S>> {
    match cfg.kind {
        EdgeSourceKind::Gradient => Ok(gradient_edges(img, cfg)),
        EdgeSourceKind::File => {
            let path = cfg.file_path.as_ref().ok_or_else(|| {
                Error::Config("edge.kind=file requires edge.file to be set".into())
            })?;
            load_edge_map(path, img.dimensions())
        }
    }
}

/// Weighted masked binary cross entropy between a prediction raster and a
/// binary ground truth.
///
/// Per pixel the BCE term `-(y ln x + (1-y) ln(1-x))` is weighted by
/// `(1-w) + w * m` where `m` is 1 inside the ground truth dilated by radius
/// `r` and 0 outside; the result is the mean over all pixels. Predictions
/// are clamped to `[1e-7, 1 - 1e-7]` before the logarithms.
pub fn masked_bce_loss<S: Scalar>(
    x: &GrayImage<S>,
    y: &BinaryMap,
    p: &MaskedBceParams<S>,
) -> Result<S> {
    if x.dimensions() != y.dimensions() {
        return Err(Error::Contract(format!(
            "prediction is {}x{} but ground truth is {}x{}",
            x.width(),
            x.height(),
            y.width(),
            y.height()
        )));
    }
    let eps = S::from_f64_lossy(1e-7);
    let one = S::one();
    let mask = dilate_disk(y, p.r);
    let background_weight = one - p.w;
    let mut sum = S::zero();
    for (i, v) in x.as_slice().iter().enumerate() {
        let xv = (*v).max(eps).min(one - eps);
        let bce = if y.as_bits()[i] {
            -xv.ln()
        } else {
            -(one - xv).ln()
        };
        let weight = if mask.as_bits()[i] {
            one
        } else {
            background_weight
        };
        sum = sum + weight * bce;
    }
    Ok(sum / S::from_usize_lossy(x.as_slice().len()))
}
