//! Deterministic CSV and Markdown reports.
//!
//! Rows are grouped by scale, then radius. Each group lists one row per
//! dataset followed by an `Average` row holding the arithmetic mean of the
//! dataset rows (PSNR averaged in dB).

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::bench::experiment::{ExperimentResult, SweepResult};
use crate::error::{Error, Result};
use crate::resample::ScaleFactor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::Report(format!(
                "unknown report format '{other}' (expected csv or markdown)"
            ))),
        }
    }
}

impl ReportFormat {
    /// `.csv` selects CSV; anything else Markdown.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Girre,
    Baseline,
    Tie,
}

impl Winner {
    fn of(girre_psnr: f64, baseline_psnr: f64) -> Self {
        if girre_psnr > baseline_psnr {
            Winner::Girre
        } else if girre_psnr < baseline_psnr {
            Winner::Baseline
        } else {
            Winner::Tie
        }
    }

    fn label(self) -> &'static str {
        match self {
            Winner::Girre => "girre",
            Winner::Baseline => "baseline",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Dataset name, or `"Average"`.
    pub label: String,
    pub is_average: bool,
    pub girre_psnr: f64,
    pub baseline_psnr: f64,
    pub diff_db: f64,
    pub girre_ssim: f64,
    pub baseline_ssim: f64,
    pub best: Winner,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportGroup {
    pub scale: ScaleFactor,
    pub radius: usize,
    pub epsilon: f64,
    pub baseline: String,
    /// Dataset rows in input order, then the average row.
    pub rows: Vec<ReportRow>,
}

impl ReportGroup {
    pub fn average(&self) -> &ReportRow {
        self.rows.last().expect("groups are never empty")
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    s / n as f64
}

/// Groups results by `(scale, radius)`, ordered by scale then radius.
pub fn group_results(results: &[ExperimentResult]) -> Result<Vec<ReportGroup>> {
    if results.is_empty() {
        return Err(Error::Report("no results to report".into()));
    }
    let mut keys: Vec<(ScaleFactor, usize)> =
        results.iter().map(|r| (r.scale, r.radius())).collect();
    keys.sort();
    keys.dedup();
    Ok(keys
        .into_iter()
        .map(|(scale, radius)| {
            let members: Vec<&ExperimentResult> = results
                .iter()
                .filter(|r| r.scale == scale && r.radius() == radius)
                .collect();
            let mut rows: Vec<ReportRow> = members
                .iter()
                .map(|r| ReportRow {
                    label: r.dataset.clone(),
                    is_average: false,
                    girre_psnr: r.girre.psnr_db,
                    baseline_psnr: r.baseline.psnr_db,
                    diff_db: r.diff_db,
                    girre_ssim: r.girre.ssim,
                    baseline_ssim: r.baseline.ssim,
                    best: Winner::of(r.girre.psnr_db, r.baseline.psnr_db),
                })
                .collect();
            let girre_psnr = mean(rows.iter().map(|r| r.girre_psnr));
            let baseline_psnr = mean(rows.iter().map(|r| r.baseline_psnr));
            let average = ReportRow {
                label: "Average".into(),
                is_average: true,
                girre_psnr,
                baseline_psnr,
                diff_db: mean(rows.iter().map(|r| r.diff_db)),
                girre_ssim: mean(rows.iter().map(|r| r.girre_ssim)),
                baseline_ssim: mean(rows.iter().map(|r| r.baseline_ssim)),
                best: Winner::of(girre_psnr, baseline_psnr),
            };
            rows.push(average);
            let mut baselines: Vec<String> =
                members.iter().map(|r| r.upscaler.to_string()).collect();
            baselines.dedup();
            ReportGroup {
                scale,
                radius,
                epsilon: members[0].params.epsilon(),
                baseline: baselines.join("+"),
                rows,
            }
        })
        .collect())
}

fn num(v: f64, decimals: usize) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.decimals$}")
    }
}

fn signed(v: f64, decimals: usize) -> String {
    if v.is_finite() && v >= 0.0 {
        format!("+{}", num(v, decimals))
    } else {
        num(v, decimals)
    }
}

const CSV_HEADER: [&str; 11] = [
    "scale",
    "radius",
    "epsilon",
    "baseline",
    "dataset",
    "girre_psnr_db",
    "baseline_psnr_db",
    "diff_db",
    "girre_ssim",
    "baseline_ssim",
    "best",
];

pub fn render_report(results: &[ExperimentResult], format: ReportFormat) -> Result<String> {
    let groups = group_results(results)?;
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for g in &groups {
                for row in &g.rows {
                    w.write_record([
                        g.scale.to_string(),
                        g.radius.to_string(),
                        g.epsilon.to_string(),
                        g.baseline.clone(),
                        row.label.clone(),
                        num(row.girre_psnr, 6),
                        num(row.baseline_psnr, 6),
                        num(row.diff_db, 6),
                        num(row.girre_ssim, 6),
                        num(row.baseline_ssim, 6),
                        row.best.label().to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            out.push_str(
                "| Scale | Radius | Dataset | GIRRE PSNR | Baseline PSNR | DIFF | GIRRE SSIM | Baseline SSIM | Upscaler | Best |\n",
            );
            out.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
            for g in &groups {
                for (i, row) in g.rows.iter().enumerate() {
                    let (scale, radius) = if i == 0 {
                        (g.scale.to_string(), g.radius.to_string())
                    } else {
                        (String::new(), String::new())
                    };
                    let bold = |s: String, on: bool| if on { format!("**{s}**") } else { s };
                    let girre_wins = row.best == Winner::Girre;
                    let base_wins = row.best == Winner::Baseline;
                    let label = if row.is_average {
                        "*Average*".to_string()
                    } else {
                        row.label.clone()
                    };
                    writeln!(
                        out,
                        "| {scale} | {radius} | {label} | {} | {} | {} | {} | {} | {} | {} |",
                        bold(num(row.girre_psnr, 2), girre_wins),
                        bold(num(row.baseline_psnr, 2), base_wins),
                        bold(signed(row.diff_db, 2), girre_wins),
                        bold(num(row.girre_ssim, 4), row.girre_ssim > row.baseline_ssim),
                        bold(
                            num(row.baseline_ssim, 4),
                            row.baseline_ssim > row.girre_ssim
                        ),
                        g.baseline,
                        row.best.label(),
                    )
                    .expect("writing to a string");
                }
            }
            Ok(out)
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Report(e.to_string())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn emit_report(results: &[ExperimentResult], format: ReportFormat, path: &Path) -> Result<()> {
    write_file(path, &render_report(results, format)?)
}

/// Per-radius table of a sweep; the best radius is flagged.
pub fn render_sweep(sweep: &SweepResult, format: ReportFormat) -> Result<String> {
    let first = sweep
        .results
        .first()
        .ok_or_else(|| Error::Report("empty sweep".into()))?;
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "dataset",
                "scale",
                "radius",
                "epsilon",
                "girre_psnr_db",
                "baseline_psnr_db",
                "diff_db",
                "girre_ssim",
                "baseline_ssim",
                "best",
            ])
            .map_err(csv_err)?;
            for r in &sweep.results {
                w.write_record([
                    r.dataset.clone(),
                    r.scale.to_string(),
                    r.radius().to_string(),
                    r.params.epsilon().to_string(),
                    num(r.girre.psnr_db, 6),
                    num(r.baseline.psnr_db, 6),
                    num(r.diff_db, 6),
                    num(r.girre.ssim, 6),
                    num(r.baseline.ssim, 6),
                    if r.radius() == sweep.best_radius {
                        "yes"
                    } else {
                        ""
                    }
                    .to_string(),
                ])
                .map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Markdown => {
            let mut out = format!(
                "Radius sweep on {} at {} (epsilon {}, baseline {})\n\n",
                first.dataset,
                first.scale,
                first.params.epsilon(),
                first.upscaler
            );
            out.push_str(
                "| Radius | GIRRE PSNR | Baseline PSNR | DIFF | GIRRE SSIM | Baseline SSIM |\n",
            );
            out.push_str("|---|---|---|---|---|---|\n");
            for r in &sweep.results {
                let radius = if r.radius() == sweep.best_radius {
                    format!("**{}**", r.radius())
                } else {
                    r.radius().to_string()
                };
                writeln!(
                    out,
                    "| {radius} | {} | {} | {} | {} | {} |",
                    num(r.girre.psnr_db, 2),
                    num(r.baseline.psnr_db, 2),
                    signed(r.diff_db, 2),
                    num(r.girre.ssim, 4),
                    num(r.baseline.ssim, 4),
                )
                .expect("writing to a string");
            }
            writeln!(out, "\nBest radius: {}", sweep.best_radius).expect("writing to a string");
            Ok(out)
        }
    }
}

pub fn emit_sweep(sweep: &SweepResult, format: ReportFormat, path: &Path) -> Result<()> {
    write_file(path, &render_sweep(sweep, format)?)
}
