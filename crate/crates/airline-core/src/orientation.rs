//! Orientation detection: the hand-crafted kernel bank and the per-pixel
//! L2-normalized orientation descriptor map.
//!
//! Channel `n` of the bank holds a 1-pixel-wide digital line through the
//! kernel center at angle `n * 180 / N` degrees, measured from +x toward +y
//! in image coordinates. Convolving the thresholded edge map with each
//! channel counts aligned edge pixels; normalizing the per-pixel count
//! vector yields the descriptor.

use crate::error::{Error, Result};
use crate::raster::BinaryMap;
use crate::scalar::Scalar;

/// Bank of `N` binary K x K line kernels.
#[derive(Debug, Clone)]
pub struct KernelBank {
    n_orientations: usize,
    kernel_size: usize,
    /// Row-major K x K grids, one per channel.
    kernels: Vec<Vec<bool>>,
    /// On-pixel offsets relative to the kernel center, one list per channel.
    offsets: Vec<Vec<(i32, i32)>>,
}

impl KernelBank {
    pub fn n_orientations(&self) -> usize {
        self.n_orientations
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel_size
    }

    /// Row-major K x K grid of channel `n`.
    pub fn kernel(&self, n: usize) -> &[bool] {
        &self.kernels[n]
    }

    /// On-pixel offsets of channel `n` relative to the center.
    pub fn kernel_offsets(&self, n: usize) -> &[(i32, i32)] {
        &self.offsets[n]
    }
}

fn round_half_away(v: f64) -> i64 {
    v.round() as i64
}

/// Digital line through the center of a k x k grid at `theta` degrees.
fn digital_line(theta_deg: f64, k: usize) -> Vec<bool> {
    let mut grid = vec![false; k * k];
    let c = (k / 2) as i64;
    let t = theta_deg.to_radians();
    let (sin, cos) = (t.sin(), t.cos());
    if cos.abs() >= sin.abs() {
        // Shallow: one pixel per column.
        let slope = sin / cos;
        for x in 0..k as i64 {
            let y = c + round_half_away((x - c) as f64 * slope);
            if (0..k as i64).contains(&y) {
                grid[(y * k as i64 + x) as usize] = true;
            }
        }
    } else {
        // Steep: one pixel per row.
        let slope = cos / sin;
        for y in 0..k as i64 {
            let x = c + round_half_away((y - c) as f64 * slope);
            if (0..k as i64).contains(&x) {
                grid[(y * k as i64 + x) as usize] = true;
            }
        }
    }
    grid
}

/// Quarter-turn of a square grid: dest(x', y') = src(y', K-1-x').
fn rotate90_grid(src: &[bool], k: usize) -> Vec<bool> {
    let mut out = vec![false; k * k];
    for yp in 0..k {
        for xp in 0..k {
            out[yp * k + xp] = src[(k - 1 - xp) * k + yp];
        }
    }
    out
}

/// Builds the kernel bank for `n` orientations and odd kernel size `k`.
///
/// Channels with angle below 90 degrees are traced directly; for even `n`
/// the remaining channels are exact quarter-turns of the channel 90 degrees
/// earlier, which makes the rotation identity
/// `rot90(kernel m) == kernel (m + n/2) mod n` hold bit for bit.
pub fn build_kernel_bank(n: usize, k: usize) -> Result<KernelBank> {
    if n < 2 {
        return Err(Error::Contract(format!(
            "kernel bank needs at least 2 orientations, got {n}"
        )));
    }
    if k < 3 || k % 2 == 0 {
        return Err(Error::Contract(format!(
            "kernel size must be odd and >= 3, got {k}"
        )));
    }
    let mut kernels: Vec<Vec<bool>> = Vec::with_capacity(n);
    for ch in 0..n {
        let theta = ch as f64 * 180.0 / n as f64;
        let grid = if theta < 90.0 || n % 2 != 0 {
            digital_line(theta, k)
        } else {
            rotate90_grid(&kernels[ch - n / 2], k)
        };
        kernels.push(grid);
    }
    let c = (k / 2) as i32;
    let offsets = kernels
        .iter()
        .map(|grid| {
            (0..k * k)
                .filter(|i| grid[*i])
                .map(|i| ((i % k) as i32 - c, (i / k) as i32 - c))
                .collect()
        })
        .collect();
    Ok(KernelBank {
        n_orientations: n,
        kernel_size: k,
        kernels,
        offsets,
    })
}

/// Integer convolution responses of the edge map against every channel,
/// evaluated at edge pixels only (zero elsewhere, zero padding at borders).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMap {
    width: usize,
    height: usize,
    channels: usize,
    counts: Vec<u32>,
}

impl ResponseMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> &[u32] {
        let i = (y * self.width + x) * self.channels;
        &self.counts[i..i + self.channels]
    }

    pub fn as_counts(&self) -> &[u32] {
        &self.counts
    }
}

/// Counts, for every edge pixel and channel, the edge pixels lying under
/// the channel's kernel line centered there.
pub fn raw_responses(edges: &BinaryMap, bank: &KernelBank) -> ResponseMap {
    let (w, h) = edges.dimensions();
    let n = bank.n_orientations();
    let mut counts = vec![0u32; w * h * n];
    for p in edges.true_pixels() {
        let base = (p.y * w + p.x) * n;
        for ch in 0..n {
            let mut count = 0u32;
            for (dx, dy) in bank.kernel_offsets(ch) {
                let x = p.x as i64 + i64::from(*dx);
                let y = p.y as i64 + i64::from(*dy);
                if x >= 0 && x < w as i64 && y >= 0 && y < h as i64 {
                    count += u32::from(edges.get(x as usize, y as usize));
                }
            }
            counts[base + ch] = count;
        }
    }
    ResponseMap {
        width: w,
        height: h,
        channels: n,
        counts,
    }
}

/// Per-pixel N-channel orientation descriptor map.
///
/// At every pixel the N-vector either has unit Euclidean norm or is exactly
/// zero (non-edge or zero-response pixels).
#[derive(Debug, Clone)]
pub struct DescriptorMap<S> {
    width: usize,
    height: usize,
    channels: usize,
    values: Vec<S>,
}

impl<S: Scalar> DescriptorMap<S> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn descriptor(&self, x: usize, y: usize) -> &[S] {
        let i = (y * self.width + x) * self.channels;
        &self.values[i..i + self.channels]
    }
}

/// Normalizes raw responses into unit descriptors at edge pixels.
pub fn descriptors_from_responses<S: Scalar>(
    responses: &ResponseMap,
    edges: &BinaryMap,
) -> DescriptorMap<S> {
    let (w, h) = (responses.width, responses.height);
    let n = responses.channels;
    let mut values = vec![S::zero(); w * h * n];
    for p in edges.true_pixels() {
        let base = (p.y * w + p.x) * n;
        let counts = &responses.counts[base..base + n];
        let norm2: u64 = counts.iter().map(|c| u64::from(*c) * u64::from(*c)).sum();
        if norm2 == 0 {
            continue;
        }
        let inv = S::one() / S::from_f64_lossy(norm2 as f64).sqrt();
        for (ch, c) in counts.iter().enumerate() {
            values[base + ch] = S::from_usize_lossy(*c as usize) * inv;
        }
    }
    DescriptorMap {
        width: w,
        height: h,
        channels: n,
        values,
    }
}

/// Convolves the edge map with the bank and L2-normalizes per pixel.
pub fn compute_descriptors<S: Scalar>(edges: &BinaryMap, bank: &KernelBank) -> DescriptorMap<S> {
    descriptors_from_responses(&raw_responses(edges, bank), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn axis_aligned_channels_n6_k9() {
        let bank = build_kernel_bank(6, 9).unwrap();
        // Channel 0 is the center row.
        let g0 = bank.kernel(0);
        for x in 0..9 {
            assert!(g0[4 * 9 + x]);
        }
        assert_eq!(g0.iter().filter(|b| **b).count(), 9);
        // Channel 3 (90 degrees) is the center column.
        let g3 = bank.kernel(3);
        for y in 0..9 {
            assert!(g3[y * 9 + 4]);
        }
        assert_eq!(g3.iter().filter(|b| **b).count(), 9);
    }

    #[test]
    fn two_channel_bank_k3() {
        let bank = build_kernel_bank(2, 3).unwrap();
        assert_eq!(bank.kernel(0), &[false, false, false, true, true, true, false, false, false]);
        assert_eq!(bank.kernel(1), &[false, true, false, false, true, false, false, true, false]);
    }

    #[test]
    fn thirty_degree_channel_shape() {
        let bank = build_kernel_bank(6, 9).unwrap();
        let g = bank.kernel(1);
        assert_eq!(g.iter().filter(|b| **b).count(), 9);
        let mut last_y = None;
        for x in 0..9 {
            let ys: Vec<usize> = (0..9).filter(|y| g[y * 9 + x]).collect();
            assert_eq!(ys.len(), 1, "one pixel per column");
            if let Some(prev) = last_y {
                assert!(ys[0] >= prev, "rows monotone");
            }
            last_y = Some(ys[0]);
        }
        assert!(g[4 * 9 + 4], "passes through center");
    }

    #[test]
    fn every_kernel_center_is_set() {
        for n in [2usize, 3, 4, 6, 8, 12] {
            for k in [3usize, 5, 9, 15] {
                let bank = build_kernel_bank(n, k).unwrap();
                let c = k / 2;
                for ch in 0..n {
                    assert!(bank.kernel(ch)[c * k + c], "n={n} k={k} ch={ch}");
                }
            }
        }
    }

    #[test]
    fn even_bank_rotation_identity() {
        for n in [2usize, 4, 6, 8] {
            let bank = build_kernel_bank(n, 9).unwrap();
            for ch in 0..n {
                let rotated = rotate90_grid(bank.kernel(ch), 9);
                assert_eq!(
                    &rotated,
                    bank.kernel((ch + n / 2) % n),
                    "n={n} channel {ch}"
                );
            }
        }
    }

    #[test]
    fn invalid_parameters_are_contract_errors() {
        assert!(build_kernel_bank(1, 9).is_err());
        assert!(build_kernel_bank(6, 8).is_err());
        assert!(build_kernel_bank(6, 1).is_err());
    }

    #[test]
    fn isolated_edge_pixel_descriptor_is_uniform() {
        let bank = build_kernel_bank(6, 9).unwrap();
        let mut edges = BinaryMap::new(32, 32);
        edges.set(16, 16, true);
        let desc: DescriptorMap<f64> = compute_descriptors(&edges, &bank);
        let d = desc.descriptor(16, 16);
        let want = 1.0 / 6.0f64.sqrt();
        for v in d {
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn horizontal_run_interior_dominated_by_channel_zero() {
        let bank = build_kernel_bank(6, 9).unwrap();
        let mut edges = BinaryMap::new(40, 11);
        for x in 5..35 {
            edges.set(x, 5, true);
        }
        let resp = raw_responses(&edges, &bank);
        for x in 9..31 {
            let c = resp.at(x, 5);
            assert_eq!(c[0], 9, "interior 0-degree response");
            for ch in 1..6 {
                assert!(c[ch] <= 3 && c[ch] < c[0], "channel {ch} at x={x}: {}", c[ch]);
            }
        }
    }

    #[test]
    fn vertical_run_is_rotated_horizontal_case() {
        let bank = build_kernel_bank(6, 9).unwrap();
        let mut horiz = BinaryMap::new(40, 40);
        for x in 5..35 {
            horiz.set(x, 20, true);
        }
        let vert = horiz.rotate90();
        let rh = raw_responses(&horiz, &bank);
        let rv = raw_responses(&vert, &bank);
        // Dominant channel of the vertical run is N/2.
        for p in vert.true_pixels() {
            let c = rv.at(p.x, p.y);
            let max = *c.iter().max().unwrap();
            assert_eq!(c[3], max);
        }
        // Full equivariance: responses at rotated pixels equal permuted
        // responses at source pixels.
        for p in horiz.true_pixels() {
            // src (x, y) -> dest (H-1-y, x) for a WxH source.
            let (h, _) = (horiz.height(), horiz.width());
            let (dx, dy) = (h - 1 - p.y, p.x);
            let src = rh.at(p.x, p.y);
            let dst = rv.at(dx, dy);
            for ch in 0..6 {
                assert_eq!(dst[(ch + 3) % 6], src[ch]);
            }
        }
    }

    fn oracle_responses(edges: &BinaryMap, bank: &KernelBank) -> Vec<u32> {
        // Naive quadruple loop over pixels, channels, and kernel cells.
        let (w, h) = edges.dimensions();
        let n = bank.n_orientations();
        let k = bank.kernel_size() as i64;
        let c = k / 2;
        let mut out = vec![0u32; w * h * n];
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                if !edges.get(x as usize, y as usize) {
                    continue;
                }
                for ch in 0..n {
                    let grid = bank.kernel(ch);
                    let mut count = 0;
                    for ky in 0..k {
                        for kx in 0..k {
                            if !grid[(ky * k + kx) as usize] {
                                continue;
                            }
                            let sx = x + kx - c;
                            let sy = y + ky - c;
                            if sx >= 0
                                && sx < w as i64
                                && sy >= 0
                                && sy < h as i64
                                && edges.get(sx as usize, sy as usize)
                            {
                                count += 1;
                            }
                        }
                    }
                    out[(y as usize * w + x as usize) * n + ch] = count;
                }
            }
        }
        out
    }

    #[test]
    fn responses_match_naive_oracle() {
        let bank = build_kernel_bank(6, 9).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let mut edges = BinaryMap::new(32, 32);
            for _ in 0..rng.gen_range(10..120) {
                edges.set(rng.gen_range(0..32), rng.gen_range(0..32), true);
            }
            let got = raw_responses(&edges, &bank);
            assert_eq!(got.as_counts(), oracle_responses(&edges, &bank).as_slice());
        }
    }

    #[test]
    fn descriptors_unit_norm_or_zero() {
        let bank = build_kernel_bank(6, 9).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut edges = BinaryMap::new(32, 32);
        for _ in 0..150 {
            edges.set(rng.gen_range(0..32), rng.gen_range(0..32), true);
        }
        let desc: DescriptorMap<f64> = compute_descriptors(&edges, &bank);
        for y in 0..32 {
            for x in 0..32 {
                let d = desc.descriptor(x, y);
                let norm: f64 = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                if edges.get(x, y) {
                    assert!((norm - 1.0).abs() < 1e-6, "({x},{y}) norm {norm}");
                    assert!(d.iter().all(|v| *v >= 0.0));
                } else {
                    assert_eq!(norm, 0.0, "non-edge pixel carries zero descriptor");
                }
            }
        }
    }
}
