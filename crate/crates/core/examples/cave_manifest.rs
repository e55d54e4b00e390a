//! Writes a dataset manifest for an unpacked CAVE multispectral database.
//!
//! Expects one directory per scene containing `<scene>_ms_01.png` ..
//! `<scene>_ms_31.png` (400 nm to 700 nm in 10 nm steps) and an RGB guide
//! `<scene>_RGB.png`, possibly one directory level deeper. The database ships
//! guides as BMP; convert them to PNG first.
//!
//! ```text
//! cargo run --release --example cave_manifest -- /data/cave > cave.toml
//! ```

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use girre::bench::{Band, DatasetManifest, SceneEntry};

fn files_under(dir: &Path, depth: usize) -> Vec<PathBuf> {
    let Ok(entries) = std::fs::read_dir(dir) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for entry in entries.flatten() {
        let path = entry.path();
        if path.is_dir() && depth > 0 {
            out.extend(files_under(&path, depth - 1));
        } else if path.is_file() {
            out.push(path);
        }
    }
    out
}

fn scene_entry(root: &Path, dir: &Path) -> Option<SceneEntry> {
    let name = dir.file_name()?.to_str()?;
    let id = name.strip_suffix("_ms").unwrap_or(name).to_string();
    let mut bands = Vec::new();
    let mut guide = None;
    for file in files_under(dir, 1) {
        let Some(stem) = file.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
        if !ext.eq_ignore_ascii_case("png") {
            continue;
        }
        let rel = file.strip_prefix(root).ok()?.to_path_buf();
        if stem.eq_ignore_ascii_case(&format!("{id}_RGB")) {
            guide = Some(rel);
        } else if let Some(index) = stem
            .strip_prefix(&format!("{id}_ms_"))
            .and_then(|n| n.parse::<u32>().ok())
        {
            bands.push(Band {
                wavelength_nm: 400.0 + 10.0 * (index as f64 - 1.0),
                path: rel,
            });
        }
    }
    if bands.is_empty() {
        return None;
    }
    bands.sort_by(|a, b| a.wavelength_nm.total_cmp(&b.wavelength_nm));
    Some(SceneEntry { id, guide, bands })
}

fn main() -> ExitCode {
    let Some(root) = std::env::args_os().nth(1).map(PathBuf::from) else {
        eprintln!("usage: cave_manifest <cave-root>");
        return ExitCode::from(1);
    };
    let Ok(entries) = std::fs::read_dir(&root) else {
        eprintln!("error: cannot read {}", root.display());
        return ExitCode::from(2);
    };
    let mut dirs: Vec<PathBuf> = entries
        .flatten()
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    let scenes: Vec<SceneEntry> = dirs.iter().filter_map(|d| scene_entry(&root, d)).collect();
    for s in scenes.iter().filter(|s| s.guide.is_none()) {
        eprintln!("warning: scene {} has no {}_RGB.png guide", s.id, s.id);
    }
    let manifest = DatasetManifest {
        name: "cave".into(),
        root: Some(root.canonicalize().unwrap_or(root)),
        resize: None,
        scenes,
    };
    print!("{}", manifest.to_toml());
    ExitCode::SUCCESS
}
