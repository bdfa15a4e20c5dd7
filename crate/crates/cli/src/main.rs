//! Command-line runner for the verification suites.
//!
//! Exit codes: 0 when every assertion passes, 1 when one fails or a
//! computation errors, 2 for usage and configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use beltrami_lab::experiment::{emit_report, run_suite, ExperimentConfig, GridParams, Suite};
use beltrami_lab::LabError;
use clap::{Parser, Subcommand};

/// Environment variable naming the default output directory.
const OUT_ENV: &str = "BELTRAMI_LAB_OUT";
const DEFAULT_OUT: &str = "beltrami-lab-out";

#[derive(Parser)]
#[command(
    name = "beltrami-lab",
    version,
    about = "Fractional-operator and Beltrami-equation verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite from a JSON experiment configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured suite.
        #[arg(long)]
        suite: Option<String>,
        /// Output directory (defaults to the config, then $BELTRAMI_LAB_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the family seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the grid as `N,L`.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, f64)>,
    },
}

fn parse_grid(s: &str) -> Result<(usize, f64), String> {
    let (n, l) = s.split_once(',').ok_or("expected N,L")?;
    let n = n.trim().parse().map_err(|e| format!("bad N: {e}"))?;
    let l = l.trim().parse().map_err(|e| format!("bad L: {e}"))?;
    Ok((n, l))
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let Command::Run {
        config,
        suite,
        out,
        seed,
        grid,
    } = Cli::parse().command;
    let mut cfg = match ExperimentConfig::load(&config) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    if let Some(name) = suite {
        match name.parse::<Suite>() {
            Ok(s) => cfg.suite = s,
            Err(e) => return usage_error(e),
        }
    }
    if let Some(seed) = seed {
        cfg.family.seed = Some(seed);
    }
    if let Some((n, l)) = grid {
        cfg.grid = GridParams {
            dim: cfg.grid.dim,
            points_per_axis: n,
            half_width: l,
        };
    }
    let out_dir = out
        .or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    cfg.output_dir = Some(out_dir.clone());
    if let Err(e) = cfg.validate() {
        return usage_error(e);
    }

    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(
            e
            @ (LabError::Config(_) | LabError::InvalidParameter { .. } | LabError::InvalidGrid(_)),
        ) => return usage_error(e),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for c in &report.criteria {
        println!(
            "[{}] criterion {:>2} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.detail
        );
    }
    match emit_report(&report, &out_dir, cfg.write_fields) {
        Ok(paths) => println!("wrote {} files to {}", paths.len(), out_dir.display()),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
