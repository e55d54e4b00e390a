//! Integer-factor resampling: bicubic upscaling and block-average downscaling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dd;
use crate::error::{Error, Result};
use crate::image::{clamp, PlanarImage};

/// Catmull-Rom cubic convolution parameter.
const CUBIC_A: f64 = -0.5;

/// Integer scale factor: `sx` for the width, `sy` for the height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScaleFactor {
    sx: usize,
    sy: usize,
}

impl ScaleFactor {
    pub fn new(sx: usize, sy: usize) -> Result<Self> {
        if sx < 2 || sy < 2 {
            return Err(Error::InvalidScale(format!(
                "{sx}x{sy}: both factors must be at least 2"
            )));
        }
        Ok(Self { sx, sy })
    }

    pub fn uniform(s: usize) -> Result<Self> {
        Self::new(s, s)
    }

    pub fn sx(self) -> usize {
        self.sx
    }

    pub fn sy(self) -> usize {
        self.sy
    }
}

impl fmt::Display for ScaleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.sx, self.sy)
    }
}

impl FromStr for ScaleFactor {
    type Err = Error;

    /// Parses `"WxH"`, e.g. `"4x4"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidScale(format!("'{s}' (expected WxH, e.g. 4x4)"));
        let (w, h) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let w = w.trim().parse::<usize>().map_err(|_| bad())?;
        let h = h.trim().parse::<usize>().map_err(|_| bad())?;
        Self::new(w, h)
    }
}

fn cubic(x: f64) -> f64 {
    let a = CUBIC_A;
    let x = x.abs();
    if x <= 1.0 {
        ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a
    } else {
        0.0
    }
}

/// Per-output-sample taps `(source index, weight)` along one axis.
///
/// Output sample `o` sits at source coordinate `(o + 0.5) * in/out - 0.5`.
/// When shrinking, the kernel is stretched by `in/out` and renormalized.
fn axis_taps(in_len: usize, out_len: usize) -> Vec<Vec<(usize, f64)>> {
    let ratio = in_len as f64 / out_len as f64;
    let stretch = ratio.max(1.0);
    let support = 2.0 * stretch;
    let last = in_len as isize - 1;
    (0..out_len)
        .map(|o| {
            let center = (o as f64 + 0.5) * ratio - 0.5;
            let first = (center - support).floor() as isize + 1;
            let end = (center + support).ceil() as isize;
            let mut taps: Vec<(usize, f64)> = (first..end)
                .map(|j| {
                    let w = cubic((j as f64 - center) / stretch);
                    (j.clamp(0, last) as usize, w)
                })
                .filter(|&(_, w)| w != 0.0)
                .collect();
            if stretch > 1.0 {
                let total: f64 = taps.iter().map(|t| t.1).sum();
                taps.iter_mut().for_each(|t| t.1 /= total);
            }
            taps
        })
        .collect()
}

/// Weighted sum of taps whose weights sum to one, written as an offset from
/// the first tap so that constant input reproduces exactly.
#[inline]
fn interpolate(taps: &[(usize, f64)], sample: impl Fn(usize) -> f64) -> f64 {
    let base = sample(taps[0].0);
    base + taps[1..]
        .iter()
        .map(|&(j, w)| w * (sample(j) - base))
        .sum::<f64>()
}

/// Separable bicubic resize to an arbitrary size, clamped to `[0, 1]`.
pub fn resize_bicubic(img: &PlanarImage, width: usize, height: usize) -> Result<PlanarImage> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "cannot resize to {width}x{height}"
        )));
    }
    let (in_w, in_h) = (img.width(), img.height());
    let xtaps = axis_taps(in_w, width);
    let ytaps = axis_taps(in_h, height);

    let mut data = Vec::with_capacity(width * height * img.channels());
    for c in 0..img.channels() {
        let src = img.plane(c);
        let mut horiz = vec![0.0; width * in_h];
        horiz
            .par_chunks_mut(width)
            .zip(src.par_chunks(in_w))
            .for_each(|(out_row, in_row)| {
                for (out, taps) in out_row.iter_mut().zip(&xtaps) {
                    *out = interpolate(taps, |j| in_row[j]);
                }
            });
        let mut plane = vec![0.0; width * height];
        plane
            .par_chunks_mut(width)
            .zip(ytaps.par_iter())
            .for_each(|(out_row, taps)| {
                for (x, out) in out_row.iter_mut().enumerate() {
                    *out = interpolate(taps, |j| horiz[j * width + x]);
                }
            });
        data.extend(plane);
    }
    let raw = PlanarImage::new_unclamped(width, height, img.channels(), data)?;
    Ok(clamp(&raw))
}

/// The upscale function: bicubic interpolation to `(W*sx, H*sy)`.
pub fn upscale_bicubic(img: &PlanarImage, scale: ScaleFactor) -> PlanarImage {
    resize_bicubic(img, img.width() * scale.sx, img.height() * scale.sy)
        .expect("scaled dimensions are non-zero")
}

/// Block-average downscaling to `(W/sx, H/sy)`; both dimensions must divide.
pub fn downscale(img: &PlanarImage, scale: ScaleFactor) -> Result<PlanarImage> {
    let (sx, sy) = (scale.sx, scale.sy);
    if !img.width().is_multiple_of(sx) || !img.height().is_multiple_of(sy) {
        return Err(Error::InvalidScale(format!(
            "{} is not divisible by {scale}",
            img.dims()
        )));
    }
    let (w, h) = (img.width() / sx, img.height() / sy);
    let in_w = img.width();
    let count = (sx * sy) as f64;
    let mut data = Vec::with_capacity(w * h * img.channels());
    for c in 0..img.channels() {
        let src = img.plane(c);
        let mut plane = vec![0.0; w * h];
        plane.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
            for (x, out) in row.iter_mut().enumerate() {
                let block = (y * sy..(y + 1) * sy).flat_map(|yy| {
                    let base = yy * in_w + x * sx;
                    &src[base..base + sx]
                });
                *out = dd::sum(block).div(count);
            }
        });
        data.extend(plane);
    }
    // block means of [0, 1] samples stay in range up to rounding
    Ok(clamp(&PlanarImage::new_unclamped(
        w,
        h,
        img.channels(),
        data,
    )?))
}
