//! Guided resolution enhancement of low-resolution infrared images.
//!
//! A low-resolution IR image is upscaled to the size of a registered
//! high-resolution RGB guide, then refined with a guided filter that fits a
//! local linear model of the IR intensities against the guide luma in every
//! window and averages the overlapping fits.
//!
//! ```no_run
//! use girre::{girre_enhance, load_image, lookup_params, save_image, BitDepth, ScaleFactor, Upscaler};
//!
//! let lr = load_image("ir.png")?;
//! let guide = load_image("rgb.png")?;
//! let scale: ScaleFactor = "4x4".parse()?;
//! let params = lookup_params(scale, Upscaler::Bicubic)?;
//! let enhanced = girre_enhance(&lr, &guide, scale, params, None)?;
//! save_image(&enhanced, "enhanced.png", BitDepth::Sixteen)?;
//! # Ok::<(), girre::Error>(())
//! ```

mod dd;

pub mod bench;
pub mod cli;
pub mod error;
pub mod guided;
pub mod image;
pub mod integral;
pub mod io;
pub mod metrics;
pub mod params;
pub mod resample;

pub use error::{Error, Result};
pub use guided::{
    average_coefficients, compute_coefficients, double_box_mean, girre_enhance, guided_transfer,
    guided_transfer_unclamped, CoefficientField, EnhanceJob, FilterParams,
};
pub use image::{clamp, to_gray, PlanarImage};
pub use integral::{box_mean, box_mean_plane, SummedAreaTable};
pub use io::{load_image, read_image, save_image, BitDepth};
pub use metrics::{evaluate, psnr, ssim, MetricReport};
pub use params::{lookup_params, ParamTable, Upscaler, DEFAULT_EPSILON};
pub use resample::{downscale, resize_bicubic, upscale_bicubic, ScaleFactor};
