//! Moments, polynomial and power-law fits, parameter sweeps, and the
//! subsystem-coupling report.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::{run_walk, Marginal};
use crate::ops::{InputKind, WalkParams};

/// Absolute tolerance for angle-equality decisions (floating-point grids
/// only hit exact equality by construction).
pub const ANGLE_EQ_TOLERANCE: f64 = 1e-12;

/// One record of a variance time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePoint {
    pub t: usize,
    pub mu: f64,
    pub var: f64,
}

/// Per-step `(t, mu, var)` series with `t` strictly increasing from 0
/// and all variances non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceSeries {
    entries: Vec<VariancePoint>,
}

impl VarianceSeries {
    pub fn new(entries: Vec<VariancePoint>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSeries("series is empty".into()));
        }
        if entries[0].t != 0 {
            return Err(Error::InvalidSeries(format!(
                "series must start at t = 0, got t = {}",
                entries[0].t
            )));
        }
        for pair in entries.windows(2) {
            if pair[1].t <= pair[0].t {
                return Err(Error::InvalidSeries(format!(
                    "t values must be strictly increasing, got {} after {}",
                    pair[1].t, pair[0].t
                )));
            }
        }
        if let Some(bad) = entries.iter().find(|p| !(p.var >= 0.0) || !p.var.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "variance at t = {} is {}, must be finite and non-negative",
                bad.t, bad.var
            )));
        }
        Ok(VarianceSeries { entries })
    }

    pub fn entries(&self) -> &[VariancePoint] {
        &self.entries
    }
}

/// Least-squares coefficients of `var(t) = k0 + k1 t + k2 t^2` plus the
/// sum of squared errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyFit {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub residual: f64,
}

/// Exponent of a `var(t) = t^beta` fit on log-log axes, with the usual
/// coefficient of determination of the regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub beta: f64,
    pub r_squared: f64,
}

/// Mean and variance of a marginal with positions measured relative to
/// `origin`: `mu = sum p_x (x - origin)`, `var = sum p_x (x - origin - mu)^2`.
pub fn moments(marginal: &Marginal, origin: usize) -> (f64, f64) {
    let mut mu = 0.0;
    for (site, &p) in marginal.probabilities().iter().enumerate() {
        mu += p * (site as f64 - origin as f64);
    }
    let mut var = 0.0;
    for (site, &p) in marginal.probabilities().iter().enumerate() {
        let d = site as f64 - origin as f64 - mu;
        var += p * d * d;
    }
    (mu, var)
}

/// Quadratic least squares over the whole series, t = 0 included.
///
/// Uses the three-term discrete orthogonal-polynomial basis over the
/// series' t values, so each coefficient is an independent projection and
/// exact quadratics are recovered to near machine precision even for a few
/// hundred steps.
pub fn fit_poly2(series: &VarianceSeries) -> Result<PolyFit> {
    let pts = series.entries();
    if pts.len() < 3 {
        return Err(Error::Underdetermined {
            need: 3,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let ts: Vec<f64> = pts.iter().map(|p| p.t as f64).collect();

    // p0 = 1, p1 = t - a, p2 = (t - b) p1 - c
    let a = ts.iter().sum::<f64>() / n;
    let p1: Vec<f64> = ts.iter().map(|t| t - a).collect();
    let p1_sq: f64 = p1.iter().map(|v| v * v).sum();
    let b = ts.iter().zip(&p1).map(|(t, v)| t * v * v).sum::<f64>() / p1_sq;
    let c = ts.iter().zip(&p1).map(|(t, v)| t * v).sum::<f64>() / n;
    let p2: Vec<f64> = ts
        .iter()
        .zip(&p1)
        .map(|(t, v)| (t - b) * v - c)
        .collect();
    let p2_sq: f64 = p2.iter().map(|v| v * v).sum();

    let project = |basis: &[f64], norm: f64| -> f64 {
        pts.iter()
            .zip(basis)
            .map(|(p, v)| p.var * v)
            .sum::<f64>()
            / norm
    };
    let c0 = pts.iter().map(|p| p.var).sum::<f64>() / n;
    let c1 = project(&p1, p1_sq);
    let c2 = project(&p2, p2_sq);

    // expand c0 + c1 (t - a) + c2 ((t - b)(t - a) - c) in powers of t
    let k2 = c2;
    let k1 = c1 - c2 * (a + b);
    let k0 = c0 - c1 * a + c2 * (a * b - c);
    let residual = pts
        .iter()
        .map(|p| {
            let t = p.t as f64;
            let err = k0 + k1 * t + k2 * t * t - p.var;
            err * err
        })
        .sum();
    Ok(PolyFit { k0, k1, k2, residual })
}

/// Slope of `log var` against `log t` over the entries with `t >= 1` and
/// `var > 0`, with intercept, so a constant prefactor never shifts beta.
/// A series with fewer than two such entries (e.g. the zero-variance
/// ballistic twin) is degenerate and reported as an error.
pub fn fit_power(series: &VarianceSeries) -> Result<PowerFit> {
    let pts: Vec<(f64, f64)> = series
        .entries()
        .iter()
        .filter(|p| p.t >= 1 && p.var > 0.0)
        .map(|p| ((p.t as f64).ln(), p.var.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateSeries);
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let beta = sxy / sxx;
    let intercept = mean_y - beta * mean_x;
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + beta * p.0);
            e * e
        })
        .sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(PowerFit { beta, r_squared })
}

/// Final-step variance over a `(theta_m, theta_b)` grid: `values[i][j]`
/// holds the walk at `theta_m = theta_m_axis[i]`, `theta_b = theta_b_axis[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSurface {
    pub theta_m: Vec<f64>,
    pub theta_b: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// Runs one walk per grid point (in parallel; each walk is independently
/// deterministic, so the assembled surface never depends on scheduling)
/// and records its final-step variance.
pub fn sweep(
    theta_m_grid: &[f64],
    theta_b_grid: &[f64],
    theta_c: f64,
    steps: usize,
    input: InputKind,
) -> Result<SweepSurface> {
    if theta_m_grid.is_empty() || theta_b_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let jobs: Vec<(f64, f64)> = theta_m_grid
        .iter()
        .flat_map(|&m| theta_b_grid.iter().map(move |&b| (m, b)))
        .collect();
    let flat: Result<Vec<f64>> = jobs
        .par_iter()
        .map(|&(theta_m, theta_b)| {
            let params = WalkParams {
                theta_c,
                theta_b,
                theta_m,
                steps,
                input,
            };
            run_walk(&params).map(|tr| tr.final_variance())
        })
        .collect();
    let flat = flat?;
    let values = flat
        .chunks(theta_b_grid.len())
        .map(|row| row.to_vec())
        .collect();
    Ok(SweepSurface {
        theta_m: theta_m_grid.to_vec(),
        theta_b: theta_b_grid.to_vec(),
        values,
    })
}

/// Evenly spaced grid over `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * (i as f64 / (n - 1) as f64))
            .collect(),
    }
}

/// Which operators couple which subsystems at the given angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingReport {
    /// The conditional coin couples position, coin and memory (requires
    /// `theta_c != theta_b`, else the coin never reads the memory).
    pub coin_couples_all_three: bool,
    /// The memory update couples position and memory (requires
    /// `theta_m != 0`).
    pub memory_couples_position_memory: bool,
    /// The shift couples position and coin at any angles.
    pub step_couples_position_coin: bool,
}

/// Classifies the subsystem couplings; angle equality is decided within
/// [`ANGLE_EQ_TOLERANCE`].
pub fn coupling_report(theta_b: f64, theta_c: f64, theta_m: f64) -> CouplingReport {
    CouplingReport {
        coin_couples_all_three: (theta_c - theta_b).abs() > ANGLE_EQ_TOLERANCE,
        memory_couples_position_memory: theta_m.abs() > ANGLE_EQ_TOLERANCE,
        step_couples_position_coin: true,
    }
}

impl std::fmt::Display for CouplingReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "coin: {}",
            if self.coin_couples_all_three {
                "couples position, coin and memory (theta_C != theta_B)"
            } else {
                "mixes the coin only (theta_C == theta_B)"
            }
        )?;
        writeln!(
            f,
            "memory: {}",
            if self.memory_couples_position_memory {
                "couples position and memory (theta_M != 0)"
            } else {
                "leaves the memory untouched (theta_M == 0)"
            }
        )?;
        write!(f, "step: couples position and coin (always)")
    }
}
