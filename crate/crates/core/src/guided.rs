//! Guided transfer of structure from a high-resolution guide onto an upscaled
//! infrared image.
//!
//! Inside each square window the output is modeled as `a * guide + b`. The pair
//! `(a, b)` is the ridge-regression fit of the approximated image against the
//! guide over that window:
//!
//! ```text
//! a = (mean(G*X) - mean(G)*mean(X)) / (var(G) + epsilon)
//! b = mean(X) - a * mean(G)
//! ```
//!
//! Every pixel lies in many windows, so the final value uses the mean of the
//! coefficients of all windows covering it: `out = mean(a) * G + mean(b)`.
//! All window statistics come from summed-area tables, so the cost per pixel
//! does not depend on the radius. Windows are truncated at the image border.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{clamp, to_gray, PlanarImage};
use crate::integral::{
    box_mean_from_table, box_mean_plane, check_window, window_span, SummedAreaTable,
};
use crate::resample::{upscale_bicubic, ScaleFactor};

/// Window radius and ridge regularization of the transfer function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    radius: usize,
    epsilon: f64,
}

impl FilterParams {
    pub fn new(radius: usize, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        Ok(Self { radius, epsilon })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Side length of the square window, `2r + 1`.
    pub fn window_side(&self) -> usize {
        2 * self.radius + 1
    }
}

/// Per-pixel linear coefficients `(a, b)` of the local model.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    width: usize,
    height: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CoefficientField {
    pub fn new(width: usize, height: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || a.len() != width * height || b.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "coefficient field {width}x{height} with {} / {} samples",
                a.len(),
                b.len()
            )));
        }
        Ok(Self {
            width,
            height,
            a,
            b,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a_at(&self, x: usize, y: usize) -> f64 {
        self.a[y * self.width + x]
    }

    pub fn b_at(&self, x: usize, y: usize) -> f64 {
        self.b[y * self.width + x]
    }

    /// Prediction of the model fitted in the window centered at `(kx, ky)`
    /// for a guide value `g`.
    pub fn predict(&self, kx: usize, ky: usize, g: f64) -> f64 {
        self.a_at(kx, ky) * g + self.b_at(kx, ky)
    }

    /// Evaluates `a_k * G_k + b_k` pointwise, without clamping.
    pub fn apply(&self, guide: &PlanarImage) -> Result<PlanarImage> {
        guide.require_channels(1)?;
        if guide.width() != self.width || guide.height() != self.height {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.width, self.height),
                right: guide.dims(),
            });
        }
        let data = guide
            .data()
            .par_iter()
            .zip(self.a.par_iter().zip(self.b.par_iter()))
            .map(|(&g, (&a, &b))| a * g + b)
            .collect();
        PlanarImage::new_unclamped(self.width, self.height, 1, data)
    }
}

/// Fits the ridge-regression coefficients in the window around every pixel.
pub fn compute_coefficients(
    guide: &PlanarImage,
    approx: &PlanarImage,
    params: FilterParams,
) -> Result<CoefficientField> {
    guide.require_channels(1)?;
    approx.require_channels(1)?;
    guide.require_same_dims(approx)?;
    let (width, height) = (guide.width(), guide.height());
    check_window(width, height, params.radius)?;

    let g = guide.data();
    let x = approx.data();
    let gx: Vec<f64> = g.iter().zip(x).map(|(g, x)| g * x).collect();
    let gg: Vec<f64> = g.iter().map(|g| g * g).collect();
    let (sum_g, sum_x, sum_gx, sum_gg) = (
        SummedAreaTable::new(g, width, height),
        SummedAreaTable::new(x, width, height),
        SummedAreaTable::new(&gx, width, height),
        SummedAreaTable::new(&gg, width, height),
    );

    let r = params.radius;
    let eps = params.epsilon;
    let mut a = vec![0.0; width * height];
    let mut b = vec![0.0; width * height];
    a.par_chunks_mut(width)
        .zip(b.par_chunks_mut(width))
        .enumerate()
        .for_each(|(ky, (a_row, b_row))| {
            let (y0, y1) = window_span(ky, r, height);
            for kx in 0..width {
                let (x0, x1) = window_span(kx, r, width);
                let mean_g = sum_g.mean(x0, y0, x1, y1);
                let mean_x = sum_x.mean(x0, y0, x1, y1);
                let mean_gx = sum_gx.mean(x0, y0, x1, y1);
                let mean_gg = sum_gg.mean(x0, y0, x1, y1);
                let var = (mean_gg - mean_g * mean_g).max(0.0);
                // a flat guide window has zero covariance with anything
                let slope = if var == 0.0 {
                    0.0
                } else {
                    (mean_gx - mean_g * mean_x) / (var + eps)
                };
                a_row[kx] = slope;
                b_row[kx] = mean_x - slope * mean_g;
            }
        });
    CoefficientField::new(width, height, a, b)
}

/// Replaces each coefficient by the mean over the windows covering its pixel.
///
/// The windows containing pixel `k` are centered on exactly the pixels of the
/// window around `k`, so this is a box mean of each field.
pub fn average_coefficients(coeffs: &CoefficientField, radius: usize) -> Result<CoefficientField> {
    let (w, h) = (coeffs.width, coeffs.height);
    check_window(w, h, radius)?;
    let (a, b) = rayon::join(
        || box_mean_from_table(&SummedAreaTable::new(&coeffs.a, w, h), radius),
        || box_mean_from_table(&SummedAreaTable::new(&coeffs.b, w, h), radius),
    );
    CoefficientField::new(w, h, a, b)
}

/// The transfer function without the final clamp.
pub fn guided_transfer_unclamped(
    approx: &PlanarImage,
    guide: &PlanarImage,
    params: FilterParams,
) -> Result<PlanarImage> {
    let coeffs = compute_coefficients(guide, approx, params)?;
    average_coefficients(&coeffs, params.radius)?.apply(guide)
}

/// The transfer function: enhances `approx` with the structure of `guide`.
/// Both images are single-channel with equal dimensions.
pub fn guided_transfer(
    approx: &PlanarImage,
    guide: &PlanarImage,
    params: FilterParams,
) -> Result<PlanarImage> {
    guided_transfer_unclamped(approx, guide, params).map(|out| clamp(&out))
}

/// A validated enhancement request.
#[derive(Debug, Clone)]
pub struct EnhanceJob {
    lr_ir: PlanarImage,
    guide: PlanarImage,
    scale: ScaleFactor,
    params: FilterParams,
    approx_override: Option<PlanarImage>,
}

impl EnhanceJob {
    /// `guide` may be RGB (reduced to luma) or already single-channel.
    /// `approx_override` replaces bicubic upscaling with an externally
    /// produced approximation at guide resolution.
    pub fn new(
        lr_ir: PlanarImage,
        guide: PlanarImage,
        scale: ScaleFactor,
        params: FilterParams,
        approx_override: Option<PlanarImage>,
    ) -> Result<Self> {
        lr_ir.require_channels(1)?;
        let (want_w, want_h) = (lr_ir.width() * scale.sx(), lr_ir.height() * scale.sy());
        if guide.width() != want_w || guide.height() != want_h {
            return Err(Error::DimensionMismatch {
                left: format!("guide {}", guide.dims()),
                right: format!(
                    "low-resolution {} x {scale} = {want_w}x{want_h}",
                    lr_ir.dims()
                ),
            });
        }
        if let Some(approx) = &approx_override {
            approx.require_channels(1)?;
            if !approx.same_dims(&guide) {
                return Err(Error::DimensionMismatch {
                    left: format!("approximation {}", approx.dims()),
                    right: format!("guide {}", guide.dims()),
                });
            }
        }
        check_window(want_w, want_h, params.radius)?;
        Ok(Self {
            lr_ir,
            guide,
            scale,
            params,
            approx_override,
        })
    }

    pub fn params(&self) -> FilterParams {
        self.params
    }

    pub fn scale(&self) -> ScaleFactor {
        self.scale
    }

    pub fn output_dims(&self) -> (usize, usize) {
        (self.guide.width(), self.guide.height())
    }

    /// The approximated image: the override if present, else bicubic.
    pub fn approximation(&self) -> PlanarImage {
        match &self.approx_override {
            Some(a) => a.clone(),
            None => upscale_bicubic(&self.lr_ir, self.scale),
        }
    }

    pub fn scalar_guide(&self) -> Result<PlanarImage> {
        match self.guide.channels() {
            3 => to_gray(&self.guide),
            _ => Ok(self.guide.clone()),
        }
    }

    pub fn run_unclamped(&self) -> Result<PlanarImage> {
        guided_transfer_unclamped(&self.approximation(), &self.scalar_guide()?, self.params)
    }

    pub fn run(&self) -> Result<PlanarImage> {
        self.run_unclamped().map(|out| clamp(&out))
    }
}

/// Upscales `lr_ir` (or takes `approx_override`) and transfers the guide's
/// structure onto it.
pub fn girre_enhance(
    lr_ir: &PlanarImage,
    guide_rgb: &PlanarImage,
    scale: ScaleFactor,
    params: FilterParams,
    approx_override: Option<&PlanarImage>,
) -> Result<PlanarImage> {
    EnhanceJob::new(
        lr_ir.clone(),
        guide_rgb.clone(),
        scale,
        params,
        approx_override.cloned(),
    )?
    .run()
}

/// Box mean used as the smoothing stage when the guide carries no structure;
/// exposed for callers that want the degenerate-guide output directly.
pub fn double_box_mean(img: &PlanarImage, radius: usize) -> Result<PlanarImage> {
    img.require_channels(1)?;
    let (w, h) = (img.width(), img.height());
    let once = box_mean_plane(img.data(), w, h, radius)?;
    let twice = box_mean_plane(&once, w, h, radius)?;
    PlanarImage::new_unclamped(w, h, 1, twice)
}
