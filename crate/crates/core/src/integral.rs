//! Summed-area tables and O(1)-per-pixel box means.
//!
//! The table is accumulated in double-double arithmetic (an `f64` head plus an
//! `f64` tail holding the rounding error). Window sums are differences of four
//! large prefix sums, and in plain `f64` that cancellation leaves an absolute
//! error proportional to the whole image sum. With the tail kept, a window sum
//! is accurate to the rounding of the window sum itself, so a window variance
//! of a flat patch comes out as zero instead of noise.

use rayon::prelude::*;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::image::PlanarImage;

/// Prefix sums over a single-channel raster with a zero guard row and column.
#[derive(Debug, Clone)]
pub struct SummedAreaTable {
    width: usize,
    height: usize,
    table: Vec<DoubleDouble>,
}

impl SummedAreaTable {
    pub fn new(data: &[f64], width: usize, height: usize) -> Self {
        assert_eq!(data.len(), width * height, "raster size mismatch");
        let stride = width + 1;
        let mut table = vec![DoubleDouble::default(); stride * (height + 1)];
        for y in 0..height {
            let mut row = DoubleDouble::default();
            for x in 0..width {
                row = row.add_f64(data[y * width + x]);
                table[(y + 1) * stride + x + 1] = table[y * stride + x + 1].add(row);
            }
        }
        Self {
            width,
            height,
            table,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn window(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> DoubleDouble {
        debug_assert!(x0 <= x1 && x1 <= self.width && y0 <= y1 && y1 <= self.height);
        let stride = self.width + 1;
        let t = &self.table;
        t[y1 * stride + x1]
            .sub(t[y0 * stride + x1])
            .sub(t[y1 * stride + x0])
            .add(t[y0 * stride + x0])
    }

    /// Sum over the half-open rectangle `[x0, x1) x [y0, y1)`.
    #[inline]
    pub fn sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
        self.window(x0, y0, x1, y1).to_f64()
    }

    /// Mean over the half-open rectangle `[x0, x1) x [y0, y1)`.
    #[inline]
    pub fn mean(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
        let count = ((x1 - x0) * (y1 - y0)) as f64;
        self.window(x0, y0, x1, y1).div(count)
    }
}

/// Clipped window `[lo, hi)` of radius `r` around `k` on an axis of length `n`.
#[inline]
pub(crate) fn window_span(k: usize, r: usize, n: usize) -> (usize, usize) {
    (k.saturating_sub(r), (k + r + 1).min(n))
}

pub(crate) fn check_window(width: usize, height: usize, radius: usize) -> Result<()> {
    let side = 2 * radius + 1;
    if side > width.min(height) {
        return Err(Error::WindowTooLarge {
            side,
            width,
            height,
        });
    }
    Ok(())
}

/// Box mean of a raster with windows truncated at the borders; every output is
/// the mean over the pixels of its window that lie inside the image.
pub fn box_mean_plane(
    data: &[f64],
    width: usize,
    height: usize,
    radius: usize,
) -> Result<Vec<f64>> {
    check_window(width, height, radius)?;
    let sat = SummedAreaTable::new(data, width, height);
    Ok(box_mean_from_table(&sat, radius))
}

pub(crate) fn box_mean_from_table(sat: &SummedAreaTable, radius: usize) -> Vec<f64> {
    let (width, height) = (sat.width(), sat.height());
    let mut out = vec![0.0; width * height];
    out.par_chunks_mut(width).enumerate().for_each(|(y, row)| {
        let (y0, y1) = window_span(y, radius, height);
        for (x, v) in row.iter_mut().enumerate() {
            let (x0, x1) = window_span(x, radius, width);
            *v = sat.mean(x0, y0, x1, y1);
        }
    });
    out
}

/// Box mean of a single-channel image.
pub fn box_mean(img: &PlanarImage, radius: usize) -> Result<PlanarImage> {
    img.require_channels(1)?;
    let data = box_mean_plane(img.data(), img.width(), img.height(), radius)?;
    PlanarImage::new_unclamped(img.width(), img.height(), 1, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_of_three_by_three() {
        let data: Vec<f64> = (1..=9).map(|v| v as f64 / 9.0).collect();
        let img = PlanarImage::new(3, 3, 1, data).unwrap();
        let m = box_mean(&img, 1).unwrap();
        assert!((m.get(1, 1, 0) - 5.0 / 9.0).abs() < 1e-15);
        // corner window is the 2x2 block {1, 2, 4, 5}
        assert!((m.get(0, 0, 0) - 12.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn constant_is_preserved() {
        for c in [0.375, 0.4, 0.7] {
            let img = PlanarImage::constant(17, 11, 1, c).unwrap();
            for r in [0, 1, 3, 5] {
                let m = box_mean(&img, r).unwrap();
                assert!(m.data().iter().all(|&v| v == c));
            }
        }
    }

    #[test]
    fn rejects_oversized_window() {
        let img = PlanarImage::constant(8, 4, 1, 0.5).unwrap();
        assert!(matches!(
            box_mean(&img, 2),
            Err(Error::WindowTooLarge { side: 5, .. })
        ));
        assert!(box_mean(&img, 1).is_ok());
    }

    #[test]
    fn flat_patch_sums_cancel_exactly() {
        // a large image whose prefix sums dwarf the window sums
        let (w, h) = (300, 300);
        let data: Vec<f64> = (0..w * h)
            .map(|i| ((i * 7919) % 1000) as f64 / 999.0)
            .collect();
        let sat = SummedAreaTable::new(&data, w, h);
        for &(x, y) in &[(0, 0), (150, 150), (299, 299), (17, 280)] {
            assert_eq!(sat.sum(x, y, x + 1, y + 1), data[y * w + x]);
        }
    }
}
