//! Grayscale image IO: PGM (P2 ASCII, P5 binary) and PNG input, PGM P5 output.
//!
//! 8-bit values map to intensities as value/255. Color PNG input is reduced
//! by channel average.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::GrayImage;
use crate::scalar::Scalar;

/// Loads an 8-bit grayscale PGM (P2/P5) or PNG as intensities in `[0, 1]`.
pub fn load_gray<S: Scalar>(path: &Path) -> Result<GrayImage<S>> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match bytes.as_slice() {
        [b'P', b'2', ..] | [b'P', b'5', ..] => parse_pgm(path, &bytes),
        [0x89, b'P', b'N', b'G', ..] => parse_png(path, &bytes),
        [] => Err(Error::Format {
            path: path.to_path_buf(),
            reason: "empty file".into(),
        }),
        _ => Err(Error::Format {
            path: path.to_path_buf(),
            reason: "unsupported format (expected PGM P2/P5 or PNG)".into(),
        }),
    }
}

/// Writes an intensity raster as binary PGM (P5) with maxval 255.
pub fn save_pgm<S: Scalar>(img: &GrayImage<S>, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    write!(out, "P5\n{} {}\n255\n", img.width(), img.height()).map_err(io_err)?;
    let bytes: Vec<u8> = img
        .as_slice()
        .iter()
        .map(|v| (v.to_f64_lossy() * 255.0).round().clamp(0.0, 255.0) as u8)
        .collect();
    out.write_all(&bytes).map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Reads ASCII header tokens, skipping whitespace and `#` comments.
struct TokenReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TokenReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_usize(&mut self) -> Option<usize> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }
}

fn parse_pgm<S: Scalar>(path: &Path, bytes: &[u8]) -> Result<GrayImage<S>> {
    let binary = bytes[1] == b'5';
    let mut tokens = TokenReader::new(&bytes[2..]);
    let width = tokens
        .next_usize()
        .ok_or_else(|| format_err(path, "PGM: missing width"))?;
    let height = tokens
        .next_usize()
        .ok_or_else(|| format_err(path, "PGM: missing height"))?;
    let maxval = tokens
        .next_usize()
        .ok_or_else(|| format_err(path, "PGM: missing maxval"))?;
    if maxval != 255 {
        return Err(format_err(
            path,
            format!("PGM: maxval {maxval} unsupported (expected 8-bit, maxval 255)"),
        ));
    }
    let n = width * height;
    let scale = S::from_f64_lossy(1.0 / 255.0);
    let data: Vec<S> = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = 2 + tokens.pos + 1;
        if bytes.len() < start + n {
            return Err(format_err(path, "PGM P5: truncated pixel data"));
        }
        bytes[start..start + n]
            .iter()
            .map(|b| S::from_usize_lossy(usize::from(*b)) * scale)
            .collect()
    } else {
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            let v = tokens
                .next_usize()
                .ok_or_else(|| format_err(path, "PGM P2: truncated pixel data"))?;
            if v > maxval {
                return Err(format_err(path, format!("PGM P2: value {v} > maxval")));
            }
            data.push(S::from_usize_lossy(v) * scale);
        }
        data
    };
    Ok(GrayImage::from_raw_unchecked(width, height, data))
}

fn parse_png<S: Scalar>(path: &Path, bytes: &[u8]) -> Result<GrayImage<S>> {
    let decoded = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| format_err(path, format!("PNG: {e}")))?;
    let scale = S::from_f64_lossy(1.0 / 255.0);
    match decoded {
        image::DynamicImage::ImageLuma8(img) => {
            let (w, h) = (img.width() as usize, img.height() as usize);
            let data = img
                .pixels()
                .map(|p| S::from_usize_lossy(usize::from(p.0[0])) * scale)
                .collect();
            Ok(GrayImage::from_raw_unchecked(w, h, data))
        }
        image::DynamicImage::ImageLumaA8(_)
        | image::DynamicImage::ImageRgb8(_)
        | image::DynamicImage::ImageRgba8(_) => {
            let rgb = decoded.to_rgb8();
            let (w, h) = (rgb.width() as usize, rgb.height() as usize);
            let data = rgb
                .pixels()
                .map(|p| {
                    let sum = u32::from(p.0[0]) + u32::from(p.0[1]) + u32::from(p.0[2]);
                    S::from_f64_lossy(f64::from(sum) / 3.0 / 255.0)
                })
                .collect();
            Ok(GrayImage::from_raw_unchecked(w, h, data))
        }
        other => Err(format_err(
            path,
            format!("PNG: unsupported pixel layout {:?} (expected 8-bit)", other.color()),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_p2_scales_by_255() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.pgm");
        std::fs::write(&p, "P2\n# comment\n2 2\n255\n0 255 128 64\n").unwrap();
        let img: GrayImage<f64> = load_gray(&p).unwrap();
        assert_eq!(img.dimensions(), (2, 2));
        let want = [0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0];
        for (got, want) in img.as_slice().iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_file_is_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.pgm");
        std::fs::write(&p, "").unwrap();
        match load_gray::<f64>(&p) {
            Err(Error::Format { .. }) => {}
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        match load_gray::<f64>(Path::new("/nonexistent/nowhere.pgm")) {
            Err(Error::Io { .. }) => {}
            other => panic!("expected io error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_magic_is_format_error_naming_expectation() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        std::fs::write(&p, b"GIF89a....").unwrap();
        let err = load_gray::<f64>(&p).unwrap_err();
        assert!(err.to_string().contains("PGM"), "{err}");
    }

    #[test]
    fn pgm_roundtrip_p5() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.pgm");
        let img =
            GrayImage::<f64>::new(3, 2, vec![0.0, 1.0, 0.5, 0.25, 0.75, 1.0]).unwrap();
        save_pgm(&img, &p).unwrap();
        let back: GrayImage<f64> = load_gray(&p).unwrap();
        assert_eq!(back.dimensions(), (3, 2));
        for (a, b) in img.as_slice().iter().zip(back.as_slice()) {
            assert!((a - b).abs() <= 0.5 / 255.0 + 1e-12);
        }
    }

    #[test]
    fn png_dimensions_and_values_pass_through() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.png");
        let mut img = image::GrayImage::new(512, 512);
        for (x, y, px) in img.enumerate_pixels_mut() {
            px.0[0] = ((x + y) % 256) as u8;
        }
        img.save(&p).unwrap();
        let loaded: GrayImage<f32> = load_gray(&p).unwrap();
        assert_eq!(loaded.dimensions(), (512, 512));
        assert!((loaded.get(1, 1) - 2.0 / 255.0).abs() < 1e-6);
    }

    #[test]
    fn color_png_averages_channels() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.png");
        let mut img = image::RgbImage::new(2, 1);
        img.put_pixel(0, 0, image::Rgb([255, 0, 0]));
        img.put_pixel(1, 0, image::Rgb([30, 60, 90]));
        img.save(&p).unwrap();
        let loaded: GrayImage<f64> = load_gray(&p).unwrap();
        assert!((loaded.get(0, 0) - 85.0 / 255.0).abs() < 1e-12);
        assert!((loaded.get(1, 0) - 60.0 / 255.0).abs() < 1e-12);
    }
}
