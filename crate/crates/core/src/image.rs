//! In-memory image representation.
//!
//! Every image is a channel-planar raster of `f64` intensities: all samples of
//! channel 0 in row-major order, then channel 1, and so on. Pixel values of a
//! normalized image lie in `[0, 1]`.

use crate::error::{Error, Result};

/// Rec. 709 luma weights for (R, G, B).
pub const LUMA_WEIGHTS: [f64; 3] = [0.2126, 0.7152, 0.0722];

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarImage {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl PlanarImage {
    /// Builds a normalized image. Every sample must lie in `[0, 1]`.
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        let img = Self::new_unclamped(width, height, channels, data)?;
        if let Some(v) = img.data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidImage(format!(
                "sample {v} outside [0, 1]; clamp before constructing"
            )));
        }
        Ok(img)
    }

    /// Builds an image whose samples may fall outside `[0, 1]`, such as the raw
    /// output of the guided transfer before clamping. Samples must be finite.
    pub fn new_unclamped(
        width: usize,
        height: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero-sized image {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!(
                "unsupported channel count {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidImage(format!(
                "data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidImage("non-finite sample".into()));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn constant(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    /// Single-channel image from a per-pixel function of `(x, y)`.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let data = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, 1, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Samples of one channel, row-major.
    pub fn plane(&self, channel: usize) -> &[f64] {
        let n = self.len();
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn get(&self, x: usize, y: usize, channel: usize) -> f64 {
        self.data[channel * self.len() + y * self.width + x]
    }

    pub fn is_normalized(&self) -> bool {
        self.data.iter().all(|v| (0.0..=1.0).contains(v))
    }

    /// `"WxH"`, used in messages.
    pub fn dims(&self) -> String {
        format!("{}x{}", self.width, self.height)
    }

    pub fn same_dims(&self, other: &PlanarImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn require_channels(&self, expected: usize) -> Result<()> {
        if self.channels != expected {
            return Err(Error::ChannelCount {
                expected,
                actual: self.channels,
            });
        }
        Ok(())
    }

    pub(crate) fn require_same_dims(&self, other: &PlanarImage) -> Result<()> {
        if !self.same_dims(other) {
            return Err(Error::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }

    /// Extracts the `width`x`height` region whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        if x0 + width > self.width || y0 + height > self.height {
            return Err(Error::InvalidImage(format!(
                "crop {width}x{height}+{x0}+{y0} exceeds {}",
                self.dims()
            )));
        }
        let mut data = Vec::with_capacity(width * height * self.channels);
        for c in 0..self.channels {
            let plane = self.plane(c);
            for y in y0..y0 + height {
                let row = y * self.width;
                data.extend_from_slice(&plane[row + x0..row + x0 + width]);
            }
        }
        Self::new_unclamped(width, height, self.channels, data)
    }

    /// Centered crop to `width`x`height`; odd margins leave the extra pixel on
    /// the right/bottom.
    pub fn center_crop(&self, width: usize, height: usize) -> Result<Self> {
        if width > self.width || height > self.height {
            return Err(Error::InvalidImage(format!(
                "cannot center-crop {} to {width}x{height}",
                self.dims()
            )));
        }
        self.crop(
            (self.width - width) / 2,
            (self.height - height) / 2,
            width,
            height,
        )
    }
}

/// Rec. 709 luma of a 3-channel image.
pub fn to_gray(img: &PlanarImage) -> Result<PlanarImage> {
    img.require_channels(3)?;
    let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
    let [wr, wg, wb] = LUMA_WEIGHTS;
    let data = r
        .iter()
        .zip(g)
        .zip(b)
        .map(|((&r, &g), &b)| {
            let lo = r.min(g).min(b);
            let hi = r.max(g).max(b);
            // rounding can push a gray pixel one ulp outside its channel range
            (wr * r + wg * g + wb * b).clamp(lo, hi)
        })
        .collect();
    PlanarImage::new_unclamped(img.width(), img.height(), 1, data)
}

pub fn clamp(img: &PlanarImage) -> PlanarImage {
    let data = img.data.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    PlanarImage { data, ..*img }
}
