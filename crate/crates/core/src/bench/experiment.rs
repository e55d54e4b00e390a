//! Evaluation protocol: simulate the low-resolution input by block-averaging
//! the ground truth, upscale it, enhance it, and score both against the
//! ground truth.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bench::manifest::{Dataset, Scene};
use crate::error::{Error, Result};
use crate::guided::{EnhanceJob, FilterParams};
use crate::image::PlanarImage;
use crate::io::load_image;
use crate::metrics::{evaluate, MetricReport};
use crate::params::Upscaler;
use crate::resample::{downscale, upscale_bicubic, ScaleFactor};

/// Extensions tried, in order, when looking up an external approximation.
pub const APPROX_EXTENSIONS: [&str; 3] = ["png", "pgm", "ppm"];

/// Source of the approximated (upscaled) images.
#[derive(Debug, Clone, Copy)]
pub enum ApproxSource<'a> {
    Bicubic,
    /// One image per scene named `<scene-id>.png` (or `.pgm`/`.ppm`).
    Directory(&'a Path),
    /// Approximations keyed by scene id.
    InMemory(&'a BTreeMap<String, PlanarImage>),
}

impl ApproxSource<'_> {
    pub fn upscaler(&self) -> Upscaler {
        match self {
            ApproxSource::Bicubic => Upscaler::Bicubic,
            _ => Upscaler::External,
        }
    }
}

/// Locates `<dir>/<scene-id>.{png,pgm,ppm}`.
pub fn find_approximation(dir: &Path, scene_id: &str) -> Option<PathBuf> {
    APPROX_EXTENSIONS
        .iter()
        .map(|ext| dir.join(format!("{scene_id}.{ext}")))
        .find(|p| p.is_file())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Girre,
    Baseline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneResult {
    pub scene: String,
    pub girre: MetricReport,
    pub baseline: MetricReport,
    pub diff_db: f64,
}

/// Aggregate over the scenes of one dataset at one scale and radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub dataset: String,
    pub scale: ScaleFactor,
    pub params: FilterParams,
    pub upscaler: Upscaler,
    /// Mean PSNR (dB) and mean SSIM over scenes.
    pub girre: MetricReport,
    pub baseline: MetricReport,
    /// `girre.psnr_db - baseline.psnr_db`.
    pub diff_db: f64,
    /// Sorted by scene id.
    pub scenes: Vec<SceneResult>,
}

/// One `(dataset, scale, radius, method)` row.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRow {
    pub dataset: String,
    pub scale: ScaleFactor,
    pub radius: usize,
    pub method: Method,
    pub psnr_db: f64,
    pub ssim: f64,
    pub diff_db: f64,
}

impl ExperimentResult {
    pub fn radius(&self) -> usize {
        self.params.radius()
    }

    pub fn rows(&self) -> [MethodRow; 2] {
        let row = |method, m: MetricReport| MethodRow {
            dataset: self.dataset.clone(),
            scale: self.scale,
            radius: self.radius(),
            method,
            psnr_db: m.psnr_db,
            ssim: m.ssim,
            diff_db: self.diff_db,
        };
        [
            row(Method::Girre, self.girre),
            row(Method::Baseline, self.baseline),
        ]
    }

    /// Scenes where the enhancement lowered PSNR.
    pub fn regressions(&self) -> impl Iterator<Item = &SceneResult> {
        self.scenes.iter().filter(|s| s.diff_db < 0.0)
    }
}

/// PSNR difference treating two infinite scores as equal.
pub fn psnr_diff(girre: f64, baseline: f64) -> f64 {
    if girre == baseline {
        0.0
    } else {
        girre - baseline
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

fn run_scene(
    scene: &Scene,
    scale: ScaleFactor,
    params: FilterParams,
    approx: ApproxSource<'_>,
) -> Result<SceneResult> {
    let wrap = |e: Error| Error::scene(&scene.id, e);
    let lr = downscale(&scene.gt, scale).map_err(wrap)?;
    let approximation = match approx {
        ApproxSource::Bicubic => upscale_bicubic(&lr, scale),
        ApproxSource::Directory(dir) => {
            let path = find_approximation(dir, &scene.id).ok_or_else(|| {
                Error::scene(
                    &scene.id,
                    format!(
                        "no approximation {}/{}.{{{}}}",
                        dir.display(),
                        scene.id,
                        APPROX_EXTENSIONS.join(",")
                    ),
                )
            })?;
            let img = load_image(&path).map_err(wrap)?;
            if img.channels() != 1 {
                return Err(Error::scene(
                    &scene.id,
                    format!("approximation {} is not single-channel", path.display()),
                ));
            }
            img
        }
        ApproxSource::InMemory(map) => map
            .get(&scene.id)
            .cloned()
            .ok_or_else(|| Error::scene(&scene.id, "no approximation supplied"))?,
    };
    let job = EnhanceJob::new(
        lr,
        scene.guide.clone(),
        scale,
        params,
        Some(approximation.clone()),
    )
    .map_err(wrap)?;
    let enhanced = job.run().map_err(wrap)?;
    let girre = evaluate(&scene.gt, &enhanced).map_err(wrap)?;
    let baseline = evaluate(&scene.gt, &approximation).map_err(wrap)?;
    Ok(SceneResult {
        scene: scene.id.clone(),
        girre,
        baseline,
        diff_db: psnr_diff(girre.psnr_db, baseline.psnr_db),
    })
}

/// Runs the protocol on every scene and averages PSNR (in dB) and SSIM.
pub fn run_experiment(
    dataset: &Dataset,
    scale: ScaleFactor,
    params: FilterParams,
    approx: ApproxSource<'_>,
) -> Result<ExperimentResult> {
    if dataset.scenes.is_empty() {
        return Err(Error::Report(format!(
            "dataset '{}' is empty",
            dataset.name
        )));
    }
    let mut scenes = dataset
        .scenes
        .par_iter()
        .map(|scene| run_scene(scene, scale, params, approx))
        .collect::<Result<Vec<_>>>()?;
    // fixed reduction order regardless of scheduling
    scenes.sort_by(|a, b| a.scene.cmp(&b.scene));

    let girre = MetricReport {
        psnr_db: mean(scenes.iter().map(|s| s.girre.psnr_db)),
        ssim: mean(scenes.iter().map(|s| s.girre.ssim)),
    };
    let baseline = MetricReport {
        psnr_db: mean(scenes.iter().map(|s| s.baseline.psnr_db)),
        ssim: mean(scenes.iter().map(|s| s.baseline.ssim)),
    };
    Ok(ExperimentResult {
        dataset: dataset.name.clone(),
        scale,
        params,
        upscaler: approx.upscaler(),
        girre,
        baseline,
        diff_db: psnr_diff(girre.psnr_db, baseline.psnr_db),
        scenes,
    })
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub best_radius: usize,
    /// One result per radius, in the order requested.
    pub results: Vec<ExperimentResult>,
}

impl SweepResult {
    pub fn best(&self) -> &ExperimentResult {
        self.results
            .iter()
            .find(|r| r.radius() == self.best_radius)
            .expect("best radius comes from the results")
    }
}

/// Runs the experiment for every radius and picks the one with the largest
/// mean PSNR gain over the approximation; ties go to the smaller radius.
pub fn sweep_radius(
    dataset: &Dataset,
    scale: ScaleFactor,
    radii: &[usize],
    epsilon: f64,
    approx: ApproxSource<'_>,
) -> Result<SweepResult> {
    if radii.is_empty() {
        return Err(Error::InvalidParams("radius list is empty".into()));
    }
    let results = radii
        .iter()
        .map(|&r| run_experiment(dataset, scale, FilterParams::new(r, epsilon)?, approx))
        .collect::<Result<Vec<_>>>()?;
    let best = results
        .iter()
        .reduce(|best, r| {
            if r.diff_db > best.diff_db || (r.diff_db == best.diff_db && r.radius() < best.radius())
            {
                r
            } else {
                best
            }
        })
        .expect("non-empty");
    Ok(SweepResult {
        best_radius: best.radius(),
        results,
    })
}
