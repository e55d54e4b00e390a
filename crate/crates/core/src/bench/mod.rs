//! Benchmark harness: dataset manifests, the evaluation protocol, radius
//! sweeps and report rendering.

pub mod experiment;
pub mod manifest;
pub mod report;
pub mod synthetic;

pub use experiment::{
    find_approximation, psnr_diff, run_experiment, sweep_radius, ApproxSource, ExperimentResult,
    Method, MethodRow, SceneResult, SweepResult,
};
pub use manifest::{
    divisible_dims, ingest_dataset, Band, Dataset, DatasetManifest, Scene, SceneEntry,
};
pub use report::{
    emit_report, emit_sweep, group_results, render_report, render_sweep, ReportFormat, ReportGroup,
    ReportRow, Winner,
};
pub use synthetic::{
    synthetic_dataset, synthetic_manifest, synthetic_scenes, write_synthetic_dataset,
    SyntheticScene,
};
