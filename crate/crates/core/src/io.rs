//! Lossless image file I/O: PNG and binary PGM/PPM, 8 or 16 bits per sample.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use image::{DynamicImage, ImageBuffer, ImageFormat, ImageReader, Luma, Rgb};

use crate::error::{Error, Result};
use crate::image::PlanarImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_code(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }

    pub fn from_bits(bits: u32) -> Option<Self> {
        match bits {
            8 => Some(BitDepth::Eight),
            16 => Some(BitDepth::Sixteen),
            _ => None,
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<PlanarImage> {
    read_image(path).map(|(img, _)| img)
}

/// Loads an image and reports the bit depth it was stored with.
pub fn read_image(path: impl AsRef<Path>) -> Result<(PlanarImage, BitDepth)> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.into(),
                message: format!("{other:?} (expected PNG or PGM/PPM)"),
            })
        }
    }
    let decoded = reader.decode().map_err(|e| Error::io(path, e))?;
    let (width, height) = (decoded.width() as usize, decoded.height() as usize);
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "{}: zero-sized image",
            path.display()
        )));
    }
    let unsupported = |kind: &str| Error::UnsupportedFormat {
        path: path.into(),
        message: kind.to_string(),
    };
    let (channels, depth, samples): (usize, BitDepth, Vec<u32>) = match decoded {
        DynamicImage::ImageLuma8(buf) => (1, BitDepth::Eight, to_u32(buf.into_raw())),
        DynamicImage::ImageLuma16(buf) => (1, BitDepth::Sixteen, to_u32(buf.into_raw())),
        DynamicImage::ImageRgb8(buf) => (3, BitDepth::Eight, to_u32(buf.into_raw())),
        DynamicImage::ImageRgb16(buf) => (3, BitDepth::Sixteen, to_u32(buf.into_raw())),
        DynamicImage::ImageLumaA8(_) | DynamicImage::ImageLumaA16(_) => {
            return Err(unsupported("gray+alpha images are not supported"))
        }
        DynamicImage::ImageRgba8(_) | DynamicImage::ImageRgba16(_) => {
            return Err(unsupported("RGBA images are not supported"))
        }
        _ => return Err(unsupported("floating-point images are not supported")),
    };
    let scale = depth.max_code();
    let n = width * height;
    let mut data = vec![0.0; n * channels];
    // interleaved -> planar
    for (i, px) in samples.chunks_exact(channels).enumerate() {
        for (c, &s) in px.iter().enumerate() {
            data[c * n + i] = s as f64 / scale;
        }
    }
    Ok((PlanarImage::new(width, height, channels, data)?, depth))
}

fn to_u32<T: Into<u32>>(v: Vec<T>) -> Vec<u32> {
    v.into_iter().map(Into::into).collect()
}

/// Quantizes with `round(v * (2^bits - 1))` and writes PNG, PGM or PPM
/// depending on the file extension.
pub fn save_image(img: &PlanarImage, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let path = path.as_ref();
    if !img.is_normalized() {
        return Err(Error::InvalidImage(format!(
            "{}: samples outside [0, 1]; clamp before saving",
            path.display()
        )));
    }
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    let pnm = match (ext.as_str(), img.channels()) {
        ("png", _) => false,
        ("pgm", 1) | ("ppm", 3) | ("pnm", _) => true,
        ("pgm", _) | ("ppm", _) => {
            return Err(Error::UnsupportedFormat {
                path: path.into(),
                message: format!(
                    "{}-channel image cannot be stored as .{ext}",
                    img.channels()
                ),
            })
        }
        _ => {
            return Err(Error::UnsupportedFormat {
                path: path.into(),
                message: format!("unknown extension '{ext}' (use .png, .pgm or .ppm)"),
            })
        }
    };

    if pnm {
        write_pnm(img, path, depth)
    } else {
        to_dynamic(img, depth)
            .save_with_format(path, ImageFormat::Png)
            .map_err(|e| Error::io(path, e))
    }
}

/// Binary PGM (`P5`) or PPM (`P6`); 16-bit samples are big-endian.
fn write_pnm(img: &PlanarImage, path: &Path, depth: BitDepth) -> Result<()> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let codes = interleaved_codes(img, depth);
    let mut bytes = format!(
        "{magic}\n{} {}\n{}\n",
        img.width(),
        img.height(),
        depth.max_code()
    )
    .into_bytes();
    match depth {
        BitDepth::Eight => bytes.extend(codes.iter().map(|&c| c as u8)),
        BitDepth::Sixteen => bytes.extend(codes.iter().flat_map(|c| c.to_be_bytes())),
    }
    let write = || -> std::io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(&bytes)?;
        out.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

fn interleaved_codes(img: &PlanarImage, depth: BitDepth) -> Vec<u16> {
    let scale = depth.max_code();
    let n = img.len();
    let channels = img.channels();
    let mut out = vec![0u16; n * channels];
    for c in 0..channels {
        for (i, &v) in img.plane(c).iter().enumerate() {
            // f64::round rounds half away from zero, i.e. half-up on [0, 1]
            out[i * channels + c] = (v * scale).round() as u16;
        }
    }
    out
}

fn to_dynamic(img: &PlanarImage, depth: BitDepth) -> DynamicImage {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let codes = interleaved_codes(img, depth);
    match (depth, img.channels()) {
        (BitDepth::Eight, 1) => {
            let raw = codes.into_iter().map(|c| c as u8).collect();
            DynamicImage::ImageLuma8(ImageBuffer::<Luma<u8>, _>::from_raw(w, h, raw).unwrap())
        }
        (BitDepth::Eight, _) => {
            let raw = codes.into_iter().map(|c| c as u8).collect();
            DynamicImage::ImageRgb8(ImageBuffer::<Rgb<u8>, _>::from_raw(w, h, raw).unwrap())
        }
        (BitDepth::Sixteen, 1) => {
            DynamicImage::ImageLuma16(ImageBuffer::<Luma<u16>, _>::from_raw(w, h, codes).unwrap())
        }
        (BitDepth::Sixteen, _) => {
            DynamicImage::ImageRgb16(ImageBuffer::<Rgb<u16>, _>::from_raw(w, h, codes).unwrap())
        }
    }
}

/// Reads only the header to get `(width, height)`.
pub fn image_dimensions(path: impl AsRef<Path>) -> Result<(usize, usize)> {
    let path = path.as_ref();
    let (w, h) = image::image_dimensions(path).map_err(|e| Error::io(path, e))?;
    Ok((w as usize, h as usize))
}
