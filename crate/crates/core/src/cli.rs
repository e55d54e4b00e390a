//! Command-line frontend.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or I/O errors.
//! `GIRRE_THREADS` caps the worker threads; results do not depend on it.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    emit_report, emit_sweep, group_results, ingest_dataset, run_experiment, sweep_radius,
    ApproxSource, DatasetManifest, ExperimentResult, ReportFormat,
};
use crate::error::Error;
use crate::guided::{EnhanceJob, FilterParams};
use crate::io::{load_image, read_image, save_image, BitDepth};
use crate::params::{lookup_params, Upscaler, DEFAULT_EPSILON};
use crate::resample::ScaleFactor;

pub const THREADS_ENV: &str = "GIRRE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "girre",
    version,
    about = "RGB-guided resolution enhancement of infrared images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enhance a low-resolution IR image with a registered RGB guide
    Enhance(EnhanceArgs),
    /// Run the evaluation protocol on one or more datasets
    Evaluate(EvaluateArgs),
    /// Sweep the filter radius and report the one with the largest PSNR gain
    Sweep(SweepArgs),
    /// Print the built-in radius and epsilon for a scale and upscaler
    Params(ParamsArgs),
}

#[derive(Debug, Args)]
struct EnhanceArgs {
    /// Low-resolution IR image (grayscale PNG/PGM)
    #[arg(long)]
    ir: PathBuf,
    /// High-resolution RGB guide (PNG/PPM)
    #[arg(long)]
    guide: PathBuf,
    /// Scale factor as WxH, e.g. 4x4
    #[arg(long)]
    scale: ScaleFactor,
    /// Output image (.png, .pgm)
    #[arg(long)]
    out: PathBuf,
    /// Window radius; defaults to the built-in table
    #[arg(long)]
    radius: Option<usize>,
    /// Ridge regularization; defaults to 1e-4
    #[arg(long)]
    epsilon: Option<f64>,
    /// Externally upscaled approximation at guide resolution, used instead of bicubic
    #[arg(long)]
    approx: Option<PathBuf>,
    /// Output bits per sample (8 or 16)
    #[arg(long, default_value = "16", value_parser = parse_bitdepth)]
    bitdepth: BitDepth,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Dataset manifest (TOML); repeat for several datasets
    #[arg(long = "manifest", required = true)]
    manifests: Vec<PathBuf>,
    /// Comma-separated scale factors, e.g. 2x2,3x3,4x4,8x8
    #[arg(long, required = true, value_delimiter = ',')]
    scales: Vec<ScaleFactor>,
    /// Source of the approximated image: bicubic or external
    #[arg(long, default_value = "bicubic")]
    mode: Upscaler,
    /// Directory of external approximations (required for --mode external)
    #[arg(long)]
    approx_dir: Option<PathBuf>,
    /// Report path
    #[arg(long)]
    report: PathBuf,
    /// csv or markdown; defaults from the report extension
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Override the built-in radius for every scale
    #[arg(long)]
    radius: Option<usize>,
    /// Override epsilon
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Dataset manifest (TOML)
    #[arg(long)]
    manifest: PathBuf,
    /// Scale factor as WxH
    #[arg(long)]
    scale: ScaleFactor,
    /// Radii as an inclusive range "1..20" or a list "1,3,6"
    #[arg(long)]
    radii: RadiusList,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Report path
    #[arg(long)]
    report: PathBuf,
    /// csv or markdown; defaults from the report extension
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Directory of external approximations; selects external mode
    #[arg(long)]
    approx_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParamsArgs {
    /// Scale factor as WxH
    #[arg(long)]
    scale: ScaleFactor,
    /// bicubic or external
    #[arg(long, default_value = "bicubic")]
    upscaler: Upscaler,
}

fn parse_bitdepth(s: &str) -> Result<BitDepth, String> {
    s.parse::<u32>()
        .ok()
        .and_then(BitDepth::from_bits)
        .ok_or_else(|| format!("'{s}' is not 8 or 16"))
}

/// Radii given as `a..b` (inclusive) or a comma-separated list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusList(pub Vec<usize>);

impl FromStr for RadiusList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((lo, hi)) = s.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let lo: usize = lo.trim().parse().map_err(|_| format!("bad range '{s}'"))?;
            let hi: usize = hi.trim().parse().map_err(|_| format!("bad range '{s}'"))?;
            if lo > hi {
                return Err(format!("empty range '{s}' (start exceeds end)"));
            }
            return Ok(RadiusList((lo..=hi).collect()));
        }
        let radii = s
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| format!("bad radius list '{s}'"))?;
        Ok(RadiusList(radii))
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

/// Runs the CLI with process stdout/stderr and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run_with(args, &mut stdout, &mut stderr)
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };

    let result = thread_pool().and_then(|pool| match pool {
        Some(pool) => pool.install(|| execute(cli.command)),
        None => execute(cli.command),
    });
    match result {
        Ok(text) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Runtime(msg)) = &e;
            let _ = writeln!(err, "error: {msg}");
            e.exit_code()
        }
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads = value
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got '{value}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Enhance(args) => cmd_enhance(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Params(args) => cmd_params(args),
    }
}

fn resolve_params(
    scale: ScaleFactor,
    upscaler: Upscaler,
    radius: Option<usize>,
    epsilon: Option<f64>,
) -> Result<FilterParams, CliError> {
    let radius = match radius {
        Some(r) => r,
        None => lookup_params(scale, upscaler)
            .map_err(|e| CliError::Usage(format!("{e}; pass --radius explicitly")))?
            .radius(),
    };
    FilterParams::new(radius, epsilon.unwrap_or(DEFAULT_EPSILON))
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_enhance(args: EnhanceArgs) -> Result<String, CliError> {
    let upscaler = if args.approx.is_some() {
        Upscaler::External
    } else {
        Upscaler::Bicubic
    };
    let params = resolve_params(args.scale, upscaler, args.radius, args.epsilon)?;

    let (ir, _) = read_image(&args.ir)?;
    if ir.channels() != 1 {
        return Err(CliError::Runtime(format!(
            "{}: IR image must be single-channel, got {} channels",
            args.ir.display(),
            ir.channels()
        )));
    }
    let guide = load_image(&args.guide)?;
    let approx = args.approx.as_deref().map(load_image).transpose()?;

    let files = {
        let mut s = format!("ir {}, guide {}", args.ir.display(), args.guide.display());
        if let Some(p) = &args.approx {
            write!(s, ", approx {}", p.display()).expect("writing to a string");
        }
        s
    };
    let job = EnhanceJob::new(ir, guide, args.scale, params, approx)
        .map_err(|e| CliError::Runtime(format!("{e} ({files})")))?;
    let enhanced = job
        .run()
        .map_err(|e| CliError::Runtime(format!("{e} ({files})")))?;
    save_image(&enhanced, &args.out, args.bitdepth)?;

    Ok(format!(
        "enhanced {} -> {}: {}, scale {}, upscaler {}, radius={} epsilon={}\n",
        args.ir.display(),
        args.out.display(),
        enhanced.dims(),
        args.scale,
        upscaler,
        params.radius(),
        params.epsilon()
    ))
}

/// Approximations for one dataset and scale live in `<base>/<dataset>/<WxH>`,
/// else `<base>/<WxH>`, else directly in `<base>` when only one dataset and
/// one scale are evaluated.
fn resolve_approx_dir(
    base: &Path,
    dataset: &str,
    scale: ScaleFactor,
    single: bool,
) -> Result<PathBuf, CliError> {
    let scale_name = scale.to_string();
    let candidates = [base.join(dataset).join(&scale_name), base.join(&scale_name)];
    if let Some(dir) = candidates.iter().find(|d| d.is_dir()) {
        return Ok(dir.clone());
    }
    if single && base.is_dir() {
        return Ok(base.to_path_buf());
    }
    Err(CliError::Runtime(format!(
        "no approximations for dataset '{dataset}' at {scale_name}: expected {} or {}",
        candidates[0].display(),
        candidates[1].display()
    )))
}

fn average_lines(results: &[ExperimentResult]) -> Result<String, CliError> {
    let mut text = String::new();
    for group in group_results(results)? {
        let avg = group.average();
        writeln!(
            text,
            "scale {} radius {}: GIRRE {:.2} dB ({:.4}) | {} {:.2} dB ({:.4}) | diff {:+.2} dB",
            group.scale,
            group.radius,
            avg.girre_psnr,
            avg.girre_ssim,
            group.baseline,
            avg.baseline_psnr,
            avg.baseline_ssim,
            avg.diff_db
        )
        .expect("writing to a string");
    }
    for r in results {
        for scene in r.regressions() {
            writeln!(
                text,
                "warning: {} / {} at {}: GIRRE below baseline by {:.2} dB",
                r.dataset, scene.scene, r.scale, -scene.diff_db
            )
            .expect("writing to a string");
        }
    }
    Ok(text)
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<String, CliError> {
    match (args.mode, &args.approx_dir) {
        (Upscaler::External, None) => {
            return Err(CliError::Usage(
                "--mode external requires --approx-dir".into(),
            ))
        }
        (Upscaler::Bicubic, Some(_)) => {
            return Err(CliError::Usage(
                "--approx-dir is only used with --mode external".into(),
            ))
        }
        _ => {}
    }
    let mut scales = args.scales.clone();
    scales.dedup();
    let params: Vec<FilterParams> = scales
        .iter()
        .map(|&s| resolve_params(s, args.mode, args.radius, args.epsilon))
        .collect::<Result<_, _>>()?;
    let format = args
        .format
        .unwrap_or_else(|| ReportFormat::from_path(&args.report));
    let single = args.manifests.len() == 1 && scales.len() == 1;

    let mut results = Vec::new();
    for manifest_path in &args.manifests {
        let manifest = DatasetManifest::load(manifest_path)?;
        let dataset = ingest_dataset(&manifest, &scales)?;
        for (&scale, &p) in scales.iter().zip(&params) {
            let dir = match &args.approx_dir {
                Some(base) => Some(resolve_approx_dir(base, &dataset.name, scale, single)?),
                None => None,
            };
            let source = match &dir {
                Some(d) => ApproxSource::Directory(d),
                None => ApproxSource::Bicubic,
            };
            results.push(run_experiment(&dataset, scale, p, source)?);
        }
    }
    emit_report(&results, format, &args.report)?;
    let mut text = average_lines(&results)?;
    writeln!(text, "report written to {}", args.report.display()).expect("writing to a string");
    Ok(text)
}

fn cmd_sweep(args: SweepArgs) -> Result<String, CliError> {
    if args.radii.0.is_empty() {
        return Err(CliError::Usage("no radii given".into()));
    }
    if !(args.epsilon.is_finite() && args.epsilon > 0.0) {
        return Err(CliError::Usage(format!(
            "epsilon must be positive, got {}",
            args.epsilon
        )));
    }
    let format = args
        .format
        .unwrap_or_else(|| ReportFormat::from_path(&args.report));
    let manifest = DatasetManifest::load(&args.manifest)?;
    let dataset = ingest_dataset(&manifest, &[args.scale])?;
    let dir = match &args.approx_dir {
        Some(base) => Some(resolve_approx_dir(base, &dataset.name, args.scale, true)?),
        None => None,
    };
    let source = match &dir {
        Some(d) => ApproxSource::Directory(d),
        None => ApproxSource::Bicubic,
    };
    let sweep = sweep_radius(&dataset, args.scale, &args.radii.0, args.epsilon, source)?;
    emit_sweep(&sweep, format, &args.report)?;

    let mut text = String::new();
    for r in &sweep.results {
        writeln!(
            text,
            "radius {:>3}: GIRRE {:.2} dB | baseline {:.2} dB | diff {:+.4} dB",
            r.radius(),
            r.girre.psnr_db,
            r.baseline.psnr_db,
            r.diff_db
        )
        .expect("writing to a string");
    }
    writeln!(
        text,
        "best radius={} (diff {:+.4} dB)",
        sweep.best_radius,
        sweep.best().diff_db
    )
    .expect("writing to a string");
    Ok(text)
}

fn cmd_params(args: ParamsArgs) -> Result<String, CliError> {
    let p = lookup_params(args.scale, args.upscaler)
        .map_err(|e| CliError::Usage(format!("{e}; enhance and evaluate accept --radius")))?;
    Ok(format!("radius={} epsilon={}\n", p.radius(), p.epsilon()))
}
