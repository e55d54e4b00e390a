//! A small deterministic multispectral dataset of geometric shapes.
//!
//! Each scene is a set of overlapping shapes with their own reflectance in
//! each of four bands, lit by smooth shading common to all bands. The RGB
//! guide is built from the three visible bands; the 850 nm band is the
//! infrared ground truth.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::manifest::{Band, Dataset, DatasetManifest, Scene, SceneEntry};
use crate::error::{Error, Result};
use crate::image::PlanarImage;
use crate::io::{save_image, BitDepth};

pub const WAVELENGTHS_NM: [f64; 4] = [450.0, 550.0, 650.0, 850.0];
pub const SCENE_SIZE: usize = 96;
pub const SCENE_COUNT: usize = 4;
pub const DATASET_NAME: &str = "synthetic";

const SEED: u64 = 0x6972_7267;
const SUPERSAMPLE: usize = 4;
const SHAPES: usize = 6;
const NIR_FROM_RED: f64 = 0.6;

#[derive(Debug, Clone, Copy)]
enum Shape {
    Rect {
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
    },
    Disc {
        cx: f64,
        cy: f64,
        r: f64,
    },
    Ring {
        cx: f64,
        cy: f64,
        r_in: f64,
        r_out: f64,
    },
}

impl Shape {
    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::Rect { x0, y0, x1, y1 } => x >= x0 && x < x1 && y >= y0 && y < y1,
            Shape::Disc { cx, cy, r } => (x - cx).powi(2) + (y - cy).powi(2) < r * r,
            Shape::Ring {
                cx,
                cy,
                r_in,
                r_out,
            } => {
                let d2 = (x - cx).powi(2) + (y - cy).powi(2);
                d2 >= r_in * r_in && d2 < r_out * r_out
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticScene {
    pub id: String,
    /// One image per entry of [`WAVELENGTHS_NM`].
    pub bands: Vec<PlanarImage>,
    pub guide: PlanarImage,
}

/// Rounds to 16-bit codes so in-memory scenes equal their saved files.
fn quantize16(v: f64) -> f64 {
    (v.clamp(0.0, 1.0) * 65535.0).round() / 65535.0
}

fn render_scene(index: usize) -> SyntheticScene {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + index as u64);
    let n = SCENE_SIZE as f64;
    let bands = WAVELENGTHS_NM.len();

    let background: Vec<f64> = (0..bands).map(|_| rng.random_range(0.25..0.75)).collect();
    let shapes: Vec<(Shape, Vec<f64>)> = (0..SHAPES)
        .map(|_| {
            let shape = match rng.random_range(0..3) {
                0 => {
                    let (x0, y0) = (
                        rng.random_range(0.0..n * 0.8),
                        rng.random_range(0.0..n * 0.8),
                    );
                    Shape::Rect {
                        x0,
                        y0,
                        x1: x0 + rng.random_range(n * 0.1..n * 0.45),
                        y1: y0 + rng.random_range(n * 0.1..n * 0.45),
                    }
                }
                1 => Shape::Disc {
                    cx: rng.random_range(0.0..n),
                    cy: rng.random_range(0.0..n),
                    r: rng.random_range(n * 0.06..n * 0.25),
                },
                _ => {
                    let r_in = rng.random_range(n * 0.05..n * 0.15);
                    Shape::Ring {
                        cx: rng.random_range(0.0..n),
                        cy: rng.random_range(0.0..n),
                        r_in,
                        r_out: r_in + rng.random_range(n * 0.03..n * 0.1),
                    }
                }
            };
            let mut reflectance: Vec<f64> =
                (0..bands).map(|_| rng.random_range(0.05..0.95)).collect();
            // near-infrared reflectance partly follows the red band
            reflectance[bands - 1] = NIR_FROM_RED * reflectance[bands - 2]
                + (1.0 - NIR_FROM_RED) * reflectance[bands - 1];
            (shape, reflectance)
        })
        .collect();
    let (fx, fy, phase) = (
        rng.random_range(0.5..2.0),
        rng.random_range(0.5..2.0),
        rng.random_range(0.0..std::f64::consts::TAU),
    );

    let mut planes = vec![vec![0.0; SCENE_SIZE * SCENE_SIZE]; bands];
    let step = 1.0 / SUPERSAMPLE as f64;
    for y in 0..SCENE_SIZE {
        for x in 0..SCENE_SIZE {
            let mut acc = vec![0.0; bands];
            for sy in 0..SUPERSAMPLE {
                for sx in 0..SUPERSAMPLE {
                    let px = x as f64 + (sx as f64 + 0.5) * step;
                    let py = y as f64 + (sy as f64 + 0.5) * step;
                    // topmost shape wins
                    let refl = shapes
                        .iter()
                        .rev()
                        .find(|(s, _)| s.contains(px, py))
                        .map_or(&background, |(_, r)| r);
                    acc.iter_mut().zip(refl).for_each(|(a, r)| *a += r);
                }
            }
            let u = x as f64 / n;
            let v = y as f64 / n;
            let shading = 0.8 + 0.2 * (std::f64::consts::TAU * (fx * u + fy * v) + phase).sin();
            let samples = (SUPERSAMPLE * SUPERSAMPLE) as f64;
            for (plane, a) in planes.iter_mut().zip(&acc) {
                plane[y * SCENE_SIZE + x] = quantize16(shading * a / samples);
            }
        }
    }

    let band_images: Vec<PlanarImage> = planes
        .iter()
        .map(|p| PlanarImage::new(SCENE_SIZE, SCENE_SIZE, 1, p.clone()).expect("valid band"))
        .collect();
    // R, G, B from the 650, 550 and 450 nm bands
    let guide_data = [2, 1, 0]
        .iter()
        .flat_map(|&b| planes[b].iter().copied())
        .collect();
    SyntheticScene {
        id: format!("shapes{:02}", index + 1),
        bands: band_images,
        guide: PlanarImage::new(SCENE_SIZE, SCENE_SIZE, 3, guide_data).expect("valid guide"),
    }
}

pub fn synthetic_scenes() -> Vec<SyntheticScene> {
    (0..SCENE_COUNT).map(render_scene).collect()
}

/// The synthetic dataset as ingested from its files, without the I/O.
pub fn synthetic_dataset() -> Dataset {
    let scenes = synthetic_scenes()
        .into_iter()
        .map(|s| Scene {
            id: s.id,
            gt: s.bands.last().expect("four bands").clone(),
            guide: s.guide,
        })
        .collect();
    Dataset::new(DATASET_NAME, scenes)
}

pub fn synthetic_manifest() -> DatasetManifest {
    DatasetManifest {
        name: DATASET_NAME.into(),
        root: None,
        resize: None,
        scenes: synthetic_scenes()
            .iter()
            .map(|s| SceneEntry {
                id: s.id.clone(),
                guide: Some(PathBuf::from(format!("{}/rgb.png", s.id))),
                bands: WAVELENGTHS_NM
                    .iter()
                    .map(|&w| Band {
                        wavelength_nm: w,
                        path: PathBuf::from(format!("{}/band_{w:.0}.png", s.id)),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Writes every scene as 16-bit PNGs plus `manifest.toml` under `dir` and
/// returns the manifest path.
pub fn write_synthetic_dataset(dir: &Path) -> Result<PathBuf> {
    let manifest = synthetic_manifest();
    for (scene, entry) in synthetic_scenes().iter().zip(&manifest.scenes) {
        let scene_dir = dir.join(&scene.id);
        std::fs::create_dir_all(&scene_dir).map_err(|e| Error::io(&scene_dir, e))?;
        for (img, band) in scene.bands.iter().zip(&entry.bands) {
            save_image(img, dir.join(&band.path), BitDepth::Sixteen)?;
        }
        let guide = entry.guide.as_ref().expect("synthetic scenes have guides");
        save_image(&scene.guide, dir.join(guide), BitDepth::Sixteen)?;
    }
    let path = dir.join("manifest.toml");
    std::fs::write(&path, manifest.to_toml()).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
