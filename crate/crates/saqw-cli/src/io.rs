//! File I/O for the CLI: CSV files with fixed headers, JSON mirrors of the
//! same rows, and the series reader used by `fit`.
//!
//! All numeric columns are written in Rust's shortest round-trip form, so
//! files carry full double precision and identical inputs produce
//! byte-identical files. The sweep's angle columns use explicit
//! 17-significant-digit scientific notation instead, so grid coordinates
//! are unambiguous keys.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use saqw::{PowerFit, SweepSurface, Trajectory, VariancePoint, VarianceSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    fn extension(self) -> &'static str {
        match self {
            FileFormat::Csv => "csv",
            FileFormat::Json => "json",
        }
    }
}

/// Fit summary printed by `run`, `classical`, and `fit`. `beta` and
/// `r_squared` are null when the power fit is degenerate (all-zero
/// variance); `k0..k2` are null when the series is too short to fit.
#[derive(Debug, Serialize)]
pub struct FitSummary {
    pub k0: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub beta: Option<f64>,
    pub r_squared: Option<f64>,
}

impl FitSummary {
    pub fn is_complete(&self) -> bool {
        self.k0.is_some() && self.beta.is_some()
    }
}

#[derive(Serialize)]
struct SeriesRow {
    t: usize,
    mean: f64,
    variance: f64,
}

#[derive(Serialize)]
struct DistRow {
    t: usize,
    x: i64,
    p: f64,
}

#[derive(Serialize)]
struct SweepRow {
    theta_m: f64,
    theta_b: f64,
    final_variance: f64,
}

#[derive(Serialize)]
pub struct BetaRow {
    pub g: f64,
    pub beta: f64,
    pub r_squared: f64,
}

fn derived_path(base: &Path, kind: &str, format: FileFormat) -> PathBuf {
    PathBuf::from(format!("{}.{kind}.{}", base.display(), format.extension()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| {
        format!("cannot write {}", path.display())
    })?))
}

fn write_json<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)?;
    Ok(())
}

/// Writes `<base>.series.csv` (header `t,mean,variance`) or its JSON
/// mirror; returns the written path.
pub fn write_series(base: &Path, format: FileFormat, series: &VarianceSeries) -> Result<PathBuf> {
    let path = derived_path(base, "series", format);
    match format {
        FileFormat::Csv => {
            let mut out = create(&path)?;
            writeln!(out, "t,mean,variance")?;
            for point in series.entries() {
                writeln!(out, "{},{},{}", point.t, point.mu, point.var)?;
            }
        }
        FileFormat::Json => {
            let rows: Vec<SeriesRow> = series
                .entries()
                .iter()
                .map(|p| SeriesRow {
                    t: p.t,
                    mean: p.mu,
                    variance: p.var,
                })
                .collect();
            write_json(&path, &rows)?;
        }
    }
    Ok(path)
}

/// Writes `<base>.dist.csv` (header `t,x,p`, `x` relative to the start
/// site, one row per light-cone position per step) or its JSON mirror.
pub fn write_distributions(
    base: &Path,
    format: FileFormat,
    trajectory: &Trajectory,
) -> Result<PathBuf> {
    let path = derived_path(base, "dist", format);
    let rows: Vec<DistRow> = trajectory
        .marginals
        .iter()
        .enumerate()
        .flat_map(|(t, marginal)| {
            (-(t as i64)..=t as i64).map(move |x| DistRow {
                t,
                x,
                p: marginal.probability_at_offset(x),
            })
        })
        .collect();
    match format {
        FileFormat::Csv => {
            let mut out = create(&path)?;
            writeln!(out, "t,x,p")?;
            for row in &rows {
                writeln!(out, "{},{},{}", row.t, row.x, row.p)?;
            }
        }
        FileFormat::Json => write_json(&path, &rows)?,
    }
    Ok(path)
}

/// Writes the sweep surface to `path`, row-major over the `theta_m` axis,
/// header `theta_m,theta_b,final_variance`.
pub fn write_sweep(path: &Path, format: FileFormat, surface: &SweepSurface) -> Result<()> {
    match format {
        FileFormat::Csv => {
            let mut out = create(path)?;
            writeln!(out, "theta_m,theta_b,final_variance")?;
            for (i, &theta_m) in surface.theta_m.iter().enumerate() {
                for (j, &theta_b) in surface.theta_b.iter().enumerate() {
                    writeln!(
                        out,
                        "{theta_m:.16e},{theta_b:.16e},{}",
                        surface.values[i][j]
                    )?;
                }
            }
        }
        FileFormat::Json => {
            let rows: Vec<SweepRow> = surface
                .theta_m
                .iter()
                .enumerate()
                .flat_map(|(i, &theta_m)| {
                    surface.theta_b.iter().enumerate().map(move |(j, &theta_b)| {
                        (i, theta_m, j, theta_b)
                    })
                })
                .map(|(i, theta_m, j, theta_b)| SweepRow {
                    theta_m,
                    theta_b,
                    final_variance: surface.values[i][j],
                })
                .collect();
            write_json(path, &rows)?;
        }
    }
    Ok(())
}

/// Writes `<base>.beta.csv` (header `g,beta,r_squared`) or its JSON mirror.
pub fn write_beta_grid(
    base: &Path,
    format: FileFormat,
    fits: &[(f64, PowerFit)],
) -> Result<PathBuf> {
    let path = derived_path(base, "beta", format);
    let rows: Vec<BetaRow> = fits
        .iter()
        .map(|&(g, fit)| BetaRow {
            g,
            beta: fit.beta,
            r_squared: fit.r_squared,
        })
        .collect();
    match format {
        FileFormat::Csv => {
            let mut out = create(&path)?;
            writeln!(out, "g,beta,r_squared")?;
            for row in &rows {
                writeln!(out, "{},{},{}", row.g, row.beta, row.r_squared)?;
            }
        }
        FileFormat::Json => write_json(&path, &rows)?,
    }
    Ok(path)
}

/// Reads a `t,mean,variance` CSV back into a series.
pub fn read_series_csv(path: &Path) -> Result<VarianceSeries> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| anyhow::anyhow!("{}: empty file", path.display()))?;
    if header.trim() != "t,mean,variance" {
        bail!(
            "{}: expected header `t,mean,variance`, got {header:?}",
            path.display()
        );
    }
    let mut points = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            bail!("{}: line {}: expected 3 fields, got {}", path.display(), idx + 2, fields.len());
        }
        let t: usize = fields[0]
            .trim()
            .parse()
            .with_context(|| format!("{}: line {}: bad t {:?}", path.display(), idx + 2, fields[0]))?;
        let mu: f64 = fields[1]
            .trim()
            .parse()
            .with_context(|| format!("{}: line {}: bad mean {:?}", path.display(), idx + 2, fields[1]))?;
        let var: f64 = fields[2]
            .trim()
            .parse()
            .with_context(|| format!("{}: line {}: bad variance {:?}", path.display(), idx + 2, fields[2]))?;
        points.push(VariancePoint { t, mu, var });
    }
    Ok(VarianceSeries::new(points)?)
}
