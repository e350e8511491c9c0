//! Command-line front end for the walk simulator.
//!
//! Subcommands: `run` (one walk, series + distribution files, fit summary
//! on stdout), `sweep` (final-variance surface over a theta_m x theta_b
//! grid), `classical` (self-avoiding random-walk ensembles, single g or a
//! g grid), and `fit` (re-fit an existing series file).
//!
//! Exit codes: 0 success, 1 I/O and data errors, 2 argument errors (clap),
//! 3 degenerate series in `fit` (beta undefined on all-zero variance).

mod io;

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use io::{FileFormat, FitSummary};
use saqw::analysis::linspace;
use saqw::{
    beta_vs_g, fit_poly2, fit_power, run_walk, simulate_saw, sweep, InputKind, SawConfig,
    VarianceSeries, WalkParams, MAX_STEPS,
};

#[derive(Parser)]
#[command(
    name = "saqw",
    version,
    about = "Self-avoiding quantum walk simulator and analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one walk; write series/distribution files and print the fit summary
    Run(RunArgs),
    /// Tabulate the final-step variance over a (theta_m, theta_b) grid
    Sweep(SweepArgs),
    /// Monte Carlo ensembles of classical self-avoiding random walks
    Classical(ClassicalArgs),
    /// Re-fit an existing `t,mean,variance` CSV and print the summary
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputArg {
    /// Equal coin superposition (mirror-symmetric dynamics)
    Sym,
    /// Single right-moving component
    Unsym,
}

impl From<InputArg> for InputKind {
    fn from(arg: InputArg) -> InputKind {
        match arg {
            InputArg::Sym => InputKind::Symmetrized,
            InputArg::Unsym => InputKind::Unsymmetrized,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Coin angle on unvisited sites, radians or a pi fraction like "pi/4"
    #[arg(long, value_parser = parse_angle, default_value = "pi/4", allow_hyphen_values = true)]
    theta_c: f64,
    /// Coin back-action angle on visited sites
    #[arg(long, value_parser = parse_angle, default_value = "0", allow_hyphen_values = true)]
    theta_b: f64,
    /// Memory recording strength
    #[arg(long, value_parser = parse_angle, default_value = "0", allow_hyphen_values = true)]
    theta_m: f64,
    /// Number of steps
    #[arg(long, default_value_t = 7, value_parser = parse_steps)]
    steps: usize,
    /// Input state
    #[arg(long, value_enum, default_value_t = InputArg::Sym)]
    input: InputArg,
    /// Base path for output files: writes <OUT>.series.<ext> and <OUT>.dist.<ext>
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file format
    #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
    format: FileFormat,
}

#[derive(Args)]
struct SweepArgs {
    /// Coin angle on unvisited sites
    #[arg(long, value_parser = parse_angle, default_value = "pi/4", allow_hyphen_values = true)]
    theta_c: f64,
    /// Number of theta_m grid points over [0, pi/2]
    #[arg(long, default_value_t = 33, value_parser = parse_grid_points)]
    grid_m: usize,
    /// Number of theta_b grid points over [0, pi/2]
    #[arg(long, default_value_t = 33, value_parser = parse_grid_points)]
    grid_b: usize,
    /// Number of steps
    #[arg(long, default_value_t = 7, value_parser = parse_steps)]
    steps: usize,
    /// Input state
    #[arg(long, value_enum, default_value_t = InputArg::Sym)]
    input: InputArg,
    /// Output file path
    #[arg(long)]
    out: PathBuf,
    /// Output file format
    #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
    format: FileFormat,
}

#[derive(Args)]
#[command(group(ArgGroup::new("strength").required(true).args(["g", "g_grid"])))]
struct ClassicalArgs {
    /// Self-avoidance strength (single-ensemble mode)
    #[arg(long)]
    g: Option<f64>,
    /// Comma-separated g values (grid mode), e.g. "0,0.5,1,2,50"
    #[arg(long, value_delimiter = ',')]
    g_grid: Option<Vec<f64>>,
    /// Walk length
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Ensemble size
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    /// Count visits modulo 2 (mirrors the flip-flop unitary memory)
    #[arg(long)]
    mod2: bool,
    /// Base RNG seed; replicates use substreams keyed by (seed, index)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Base path for output files: <OUT>.series.<ext> or <OUT>.beta.<ext>
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file format
    #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
    format: FileFormat,
}

#[derive(Args)]
struct FitArgs {
    /// Series file with header `t,mean,variance`
    file: PathBuf,
}

/// Parses an angle given in radians ("0.785", "-1.2e-3") or as a pi
/// fraction ("pi", "pi/4", "-pi/2", "3pi/4"), exactly in the fraction case.
fn parse_angle(text: &str) -> Result<f64, String> {
    let trimmed = text.trim();
    let (sign, rest) = match trimmed.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, trimmed),
    };
    let magnitude = if let Some((numer, denom)) = rest.split_once('/') {
        let d: f64 = denom
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator in angle {text:?}"))?;
        if d == 0.0 {
            return Err(format!("zero denominator in angle {text:?}"));
        }
        parse_pi_multiple(numer, text)? / d
    } else {
        parse_pi_multiple(rest, text)?
    };
    let value = sign * magnitude;
    if !value.is_finite() {
        return Err(format!("angle {text:?} is not finite"));
    }
    Ok(value)
}

fn parse_pi_multiple(text: &str, original: &str) -> Result<f64, String> {
    let trimmed = text.trim();
    if trimmed == "pi" {
        return Ok(PI);
    }
    if let Some(coefficient) = trimmed.strip_suffix("pi") {
        let c: f64 = coefficient
            .trim()
            .parse()
            .map_err(|_| format!("invalid angle {original:?}"))?;
        return Ok(c * PI);
    }
    trimmed
        .parse()
        .map_err(|_| format!("invalid angle {original:?} (expected radians or a pi fraction)"))
}

fn parse_steps(text: &str) -> Result<usize, String> {
    let steps: usize = text
        .parse()
        .map_err(|_| format!("invalid step count {text:?}"))?;
    if steps == 0 || steps > MAX_STEPS {
        return Err(format!(
            "steps must be between 1 and {MAX_STEPS} (64-bit memory register cap)"
        ));
    }
    Ok(steps)
}

fn parse_grid_points(text: &str) -> Result<usize, String> {
    let n: usize = text
        .parse()
        .map_err(|_| format!("invalid grid size {text:?}"))?;
    if n == 0 {
        return Err("grid needs at least one point".into());
    }
    Ok(n)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Classical(args) => cmd_classical(args),
        Command::Fit(args) => cmd_fit(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Both fits of a series; missing pieces become nulls in the summary.
fn summarize(series: &VarianceSeries) -> Result<FitSummary> {
    let poly = match fit_poly2(series) {
        Ok(fit) => Some(fit),
        Err(saqw::Error::Underdetermined { .. }) => None,
        Err(err) => return Err(err.into()),
    };
    let power = match fit_power(series) {
        Ok(fit) => Some(fit),
        Err(saqw::Error::DegenerateSeries) => None,
        Err(err) => return Err(err.into()),
    };
    Ok(FitSummary {
        k0: poly.map(|f| f.k0),
        k1: poly.map(|f| f.k1),
        k2: poly.map(|f| f.k2),
        beta: power.map(|f| f.beta),
        r_squared: power.map(|f| f.r_squared),
    })
}

fn print_summary(summary: &FitSummary) -> Result<()> {
    println!("{}", serde_json::to_string(summary)?);
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let params = WalkParams {
        theta_c: args.theta_c,
        theta_b: args.theta_b,
        theta_m: args.theta_m,
        steps: args.steps,
        input: args.input.into(),
    };
    let trajectory = run_walk(&params)?;
    if let Some(base) = &args.out {
        io::write_series(base, args.format, &trajectory.variances)?;
        io::write_distributions(base, args.format, &trajectory)?;
    }
    print_summary(&summarize(&trajectory.variances)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let m_grid = linspace(0.0, FRAC_PI_2, args.grid_m);
    let b_grid = linspace(0.0, FRAC_PI_2, args.grid_b);
    let surface = sweep(&m_grid, &b_grid, args.theta_c, args.steps, args.input.into())?;
    io::write_sweep(&args.out, args.format, &surface)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classical(args: ClassicalArgs) -> Result<ExitCode> {
    if let Some(grid) = &args.g_grid {
        let fits = beta_vs_g(grid, args.steps, args.reps, args.mod2, args.seed)?;
        if let Some(base) = &args.out {
            io::write_beta_grid(base, args.format, &fits)?;
        }
        let rows: Vec<io::BetaRow> = fits
            .iter()
            .map(|&(g, fit)| io::BetaRow {
                g,
                beta: fit.beta,
                r_squared: fit.r_squared,
            })
            .collect();
        println!("{}", serde_json::to_string(&rows)?);
    } else {
        let config = SawConfig {
            g: args.g.expect("clap group guarantees g"),
            steps: args.steps,
            replicates: args.reps,
            mod2: args.mod2,
            seed: args.seed,
        };
        let series = simulate_saw(&config)?;
        if let Some(base) = &args.out {
            io::write_series(base, args.format, &series)?;
        }
        print_summary(&summarize(&series)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit(args: FitArgs) -> Result<ExitCode> {
    let series = io::read_series_csv(&args.file)?;
    let summary = summarize(&series)?;
    print_summary(&summary)?;
    if summary.is_complete() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: degenerate variance series: beta (or the polynomial fit) is undefined");
        Ok(ExitCode::from(3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_parse_as_radians_or_pi_fractions() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("1.5").unwrap(), 1.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn step_counts_enforce_the_register_cap() {
        assert_eq!(parse_steps("7").unwrap(), 7);
        assert_eq!(parse_steps("30").unwrap(), 30);
        assert!(parse_steps("0").is_err());
        assert!(parse_steps("31").is_err());
        assert!(parse_steps("x").is_err());
    }
}
