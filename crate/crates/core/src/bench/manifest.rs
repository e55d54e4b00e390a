//! Dataset manifests and ingestion.
//!
//! A manifest is a TOML file:
//!
//! ```toml
//! name = "cave"
//! root = "/data/cave"        # optional; defaults to the manifest's directory
//! resize = [512, 512]        # optional; bicubic resize of every image first
//!
//! [[scenes]]
//! id = "balloons"
//! guide = "balloons/rgb.png"
//! bands = [
//!     { wavelength_nm = 690, path = "balloons/band_690.png" },
//!     { wavelength_nm = 700, path = "balloons/band_700.png" },
//! ]
//! ```
//!
//! Relative paths resolve against `root`. The ground truth of a scene is its
//! longest-wavelength band.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::PlanarImage;
use crate::io::{image_dimensions, load_image};
use crate::resample::{resize_bicubic, ScaleFactor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub wavelength_nm: f64,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guide: Option<PathBuf>,
    #[serde(default)]
    pub bands: Vec<Band>,
}

impl SceneEntry {
    /// The longest-wavelength band.
    pub fn ground_truth_band(&self) -> Option<&Band> {
        self.bands.last()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resize: Option<[usize; 2]>,
    pub scenes: Vec<SceneEntry>,
}

impl DatasetManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| match e {
            Error::Manifest { message, .. } => Error::Manifest {
                path: path.into(),
                message,
            },
            other => other,
        })
    }

    /// Parses manifest text; a relative or missing `root` resolves against
    /// `base_dir`. Bands are sorted by wavelength.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let err = |message: String| Error::Manifest {
            path: base_dir.into(),
            message,
        };
        let mut manifest: DatasetManifest = toml::from_str(text).map_err(|e| err(e.to_string()))?;
        manifest.root = Some(match manifest.root.take() {
            Some(root) if root.is_absolute() => root,
            Some(root) => base_dir.join(root),
            None => base_dir.to_path_buf(),
        });
        manifest.validate().map_err(err)?;
        Ok(manifest)
    }

    fn validate(&mut self) -> std::result::Result<(), String> {
        if self.name.trim().is_empty() {
            return Err("dataset name is empty".into());
        }
        if let Some([w, h]) = self.resize {
            if w == 0 || h == 0 {
                return Err(format!("invalid resize {w}x{h}"));
            }
        }
        let mut ids = BTreeSet::new();
        for scene in &mut self.scenes {
            if scene.id.is_empty() || scene.id.contains(['/', '\\']) || scene.id.starts_with('.') {
                return Err(format!("invalid scene id '{}'", scene.id));
            }
            if !ids.insert(scene.id.clone()) {
                return Err(format!("duplicate scene id '{}'", scene.id));
            }
            if let Some(b) = scene.bands.iter().find(|b| !b.wavelength_nm.is_finite()) {
                return Err(format!(
                    "scene '{}': invalid wavelength {}",
                    scene.id, b.wavelength_nm
                ));
            }
            scene
                .bands
                .sort_by(|a, b| a.wavelength_nm.total_cmp(&b.wavelength_nm));
            if let Some(w) = scene
                .bands
                .windows(2)
                .find(|w| w[0].wavelength_nm == w[1].wavelength_nm)
            {
                return Err(format!(
                    "scene '{}': duplicate wavelength {} nm",
                    scene.id, w[0].wavelength_nm
                ));
            }
        }
        Ok(())
    }

    pub fn root(&self) -> &Path {
        self.root.as_deref().unwrap_or(Path::new("."))
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.root().join(path)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("manifest serializes")
    }
}

/// A scene ready for evaluation: ground-truth IR band and RGB guide, cropped
/// to a size every requested scale divides.
#[derive(Debug, Clone)]
pub struct Scene {
    pub id: String,
    pub gt: PlanarImage,
    pub guide: PlanarImage,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    /// Sorted by scene id.
    pub scenes: Vec<Scene>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, mut scenes: Vec<Scene>) -> Self {
        scenes.sort_by(|a, b| a.id.cmp(&b.id));
        Self {
            name: name.into(),
            scenes,
        }
    }

    /// Smallest scene width and height.
    pub fn min_dims(&self) -> Option<(usize, usize)> {
        self.scenes
            .iter()
            .map(|s| (s.gt.width(), s.gt.height()))
            .reduce(|a, b| (a.0.min(b.0), a.1.min(b.1)))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Largest `(width, height)` not exceeding the input that every requested
/// scale factor divides.
pub fn divisible_dims(width: usize, height: usize, scales: &[ScaleFactor]) -> (usize, usize) {
    let lx = scales.iter().map(|s| s.sx()).fold(1, lcm);
    let ly = scales.iter().map(|s| s.sy()).fold(1, lcm);
    (width - width % lx, height - height % ly)
}

/// Loads every scene of `manifest` and center-crops it for `scales`.
pub fn ingest_dataset(manifest: &DatasetManifest, scales: &[ScaleFactor]) -> Result<Dataset> {
    let scenes = manifest
        .scenes
        .par_iter()
        .map(|entry| ingest_scene(manifest, entry, scales))
        .collect::<Result<Vec<_>>>()?;
    if scenes.is_empty() {
        return Err(Error::Manifest {
            path: manifest.root().into(),
            message: format!("dataset '{}' has no scenes", manifest.name),
        });
    }
    Ok(Dataset::new(manifest.name.clone(), scenes))
}

fn ingest_scene(
    manifest: &DatasetManifest,
    entry: &SceneEntry,
    scales: &[ScaleFactor],
) -> Result<Scene> {
    let id = entry.id.as_str();
    let gt_band = entry
        .ground_truth_band()
        .ok_or_else(|| Error::scene(id, "no band files"))?;
    let guide_path = entry
        .guide
        .as_ref()
        .map(|p| manifest.resolve(p))
        .ok_or_else(|| Error::scene(id, "missing guide file"))?;
    if !guide_path.is_file() {
        return Err(Error::scene(
            id,
            format!("guide file {} not found", guide_path.display()),
        ));
    }

    let gt_path = manifest.resolve(&gt_band.path);
    let mut gt = load_image(&gt_path).map_err(|e| Error::scene(id, e))?;
    if gt.channels() != 1 {
        return Err(Error::scene(
            id,
            format!("band {} is not single-channel", gt_path.display()),
        ));
    }
    for band in &entry.bands[..entry.bands.len() - 1] {
        let path = manifest.resolve(&band.path);
        let dims = image_dimensions(&path).map_err(|e| Error::scene(id, e))?;
        if dims != (gt.width(), gt.height()) {
            return Err(Error::scene(
                id,
                format!(
                    "band {} is {}x{}, ground truth is {}",
                    path.display(),
                    dims.0,
                    dims.1,
                    gt.dims()
                ),
            ));
        }
    }
    let mut guide = load_image(&guide_path).map_err(|e| Error::scene(id, e))?;
    if !guide.same_dims(&gt) {
        return Err(Error::scene(
            id,
            format!("guide is {}, ground truth is {}", guide.dims(), gt.dims()),
        ));
    }

    if let Some([w, h]) = manifest.resize {
        gt = resize_bicubic(&gt, w, h)?;
        guide = resize_bicubic(&guide, w, h)?;
    }

    let (w, h) = divisible_dims(gt.width(), gt.height(), scales);
    if w == 0 || h == 0 {
        return Err(Error::scene(
            id,
            format!("{} is too small for the requested scales", gt.dims()),
        ));
    }
    Ok(Scene {
        id: id.to_string(),
        gt: gt.center_crop(w, h)?,
        guide: guide.center_crop(w, h)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MANIFEST: &str = r#"
name = "demo"
root = "data"

[[scenes]]
id = "a"
guide = "a/rgb.png"
bands = [
    { wavelength_nm = 650, path = "a/650.png" },
    { wavelength_nm = 420, path = "a/420.png" },
    { wavelength_nm = 500, path = "a/500.png" },
]
"#;

    #[test]
    fn ground_truth_is_longest_wavelength() {
        let m = DatasetManifest::parse(MANIFEST, Path::new("/base")).unwrap();
        assert_eq!(m.root(), Path::new("/base/data"));
        let gt = m.scenes[0].ground_truth_band().unwrap();
        assert_eq!(gt.wavelength_nm, 650.0);
        assert_eq!(m.resolve(&gt.path), Path::new("/base/data/a/650.png"));
    }

    #[test]
    fn rejects_duplicate_wavelengths_and_ids() {
        let dup = MANIFEST.replace("500", "420");
        assert!(DatasetManifest::parse(&dup, Path::new(".")).is_err());
        let twice = format!("{MANIFEST}\n[[scenes]]\nid = \"a\"\n");
        assert!(DatasetManifest::parse(&twice, Path::new(".")).is_err());
    }

    #[test]
    fn crop_rule() {
        let scales: Vec<_> = [2, 3, 4, 8]
            .iter()
            .map(|&s| ScaleFactor::uniform(s).unwrap())
            .collect();
        assert_eq!(divisible_dims(512, 512, &scales), (504, 504));
        assert_eq!(divisible_dims(512, 512, &scales[..1]), (512, 512));
        assert_eq!(divisible_dims(7, 5, &[]), (7, 5));
    }

    #[test]
    fn empty_scene_is_named() {
        let text = "name = \"x\"\n[[scenes]]\nid = \"lonely\"\nguide = \"g.png\"\n";
        let m = DatasetManifest::parse(text, Path::new(".")).unwrap();
        let err = ingest_dataset(&m, &[]).unwrap_err().to_string();
        assert!(err.contains("lonely") && err.contains("no band"), "{err}");
    }
}
