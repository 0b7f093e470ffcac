//! `asymptote`: crossing numbers, writhe, twist, and linking for closed
//! space curves carrying an asymptotic Darboux framing.

mod analyze;
mod artifacts;
mod export;
mod reproduce;
mod spec;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvature_core::{Error, Result};

#[derive(Parser)]
#[command(name = "asymptote", version, about = "invariants of framed closed space curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full invariant report for one curve.
    Analyze {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Rebuild a studied curve end to end and write its figure data.
    Reproduce {
        /// which study to rerun
        #[arg(value_parser = ["kovaleva", "example2"])]
        which: String,
        /// normal-loop scale for the constructed example
        #[arg(long, default_value_t = 0.22)]
        sigma: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Cross-check the identity suite on built-ins and seeded random curves.
    Verify {
        /// number of seeded random curves
        #[arg(long, default_value_t = 3)]
        curves: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write curve samples, projection, frames, and report to disk.
    Export {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct CurveArgs {
    /// built-in name: circle | torus-knot | coiled-trefoil | lifted-eight | kovaleva | example2
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// curve spec file (JSON; see README for the schema)
    #[arg(long)]
    input: Option<PathBuf>,
    /// torus-knot winding numbers
    #[arg(long, default_value_t = 2)]
    p: i64,
    #[arg(long, default_value_t = 3)]
    q: i64,
    /// normal-loop scale when the curve is the constructed example
    #[arg(long, default_value_t = 0.22)]
    sigma: f64,
}

#[derive(Args)]
struct RunArgs {
    /// pinned projection direction "x,y,z"
    #[arg(long, value_parser = parse_direction)]
    direction: Option<[f64; 3]>,
    /// seed for direction sweeps and random curves
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Monte Carlo direction count
    #[arg(long)]
    dirs: Option<usize>,
    /// fit/framing sample count: a power of two, at least 256
    #[arg(long, default_value_t = 2048)]
    samples: usize,
    /// identity-residual tolerance for the exit status
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// directory for written artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// stdout format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_direction(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got `{s}`"));
    }
    let mut d = [0.0f64; 3];
    for (slot, part) in d.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad component `{part}`: {e}"))?;
    }
    let norm_sq: f64 = d.iter().map(|x| x * x).sum();
    if !norm_sq.is_finite() || norm_sq == 0.0 {
        return Err("direction must be finite and nonzero".into());
    }
    Ok(d)
}

fn check_run(run: &RunArgs) -> Result<()> {
    if !run.samples.is_power_of_two() || run.samples < 256 {
        return Err(Error::InvalidSpec(format!(
            "--samples must be a power of two of at least 256, got {}",
            run.samples
        )));
    }
    if !run.tol.is_finite() || run.tol <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "--tol must be positive, got {}",
            run.tol
        )));
    }
    Ok(())
}

/// 2: the request itself is unusable. 3: the mathematics failed at runtime.
/// 4: the filesystem did.
fn exit_class(e: &Error) -> u8 {
    match e {
        Error::InvalidSpec(_)
        | Error::ImaginaryComponent { .. }
        | Error::ClosureInfeasible { .. }
        | Error::NotImmersed { .. }
        | Error::NoDarbouxFraming(_)
        | Error::NotAsymptotic { .. }
        | Error::NonGenericDirection(_)
        | Error::InapplicableDirection(_)
        | Error::NoSelfLinking(_)
        | Error::Json(_) => 2,
        Error::Io(_) => 4,
        _ => 3,
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { curve, run } => {
            check_run(&run)?;
            analyze::run(&curve, &run)
        }
        Command::Reproduce { which, sigma, run } => {
            check_run(&run)?;
            reproduce::run(&which, sigma, &run)
        }
        Command::Verify { curves, run } => {
            check_run(&run)?;
            verify::run(&run, curves)
        }
        Command::Export { curve, run } => {
            check_run(&run)?;
            export::run(&curve, &run)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("ASYMPTOTE_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("warning: ignoring ASYMPTOTE_THREADS={v}"),
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_class(&e))
        }
    }
}
