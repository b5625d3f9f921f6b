//! `focklab`: experiment runner for the Fock-space laboratory.
//!
//! Exit codes: 0 all invariants hold, 1 configuration or usage error,
//! 2 an invariant failed, 3 a truncation did not converge. An invariant
//! failure takes precedence over non-convergence.

// `!(x > 0.0)` and friends are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use error::CliError;
use output::{Format, Summary, Table};

#[derive(Debug, Parser)]
#[command(
    name = "focklab",
    version,
    about = "Numerical experiments on generalized Fock spaces"
)]
struct Cli {
    /// Experiment configuration (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output table; the summary goes to `<out>.summary.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Table format.
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Seed for random symbols and test polynomials (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Leading-term accuracy of the Mittag-Leffler asymptotics.
    MlValidate,
    /// Hankel norm against the growth-space norm of the symbol.
    HankelRatio,
    /// Compactness diagnostics over increasing truncations.
    Compactness,
    /// Laplace's method on problems with known answers.
    LaplaceCheck,
    /// Growth of kernel norms along a ray.
    KernelNorms,
    /// Fejér and dilation approximation of a little-oh symbol.
    Fejer,
    /// Reproducing property of the projection on random polynomials.
    ProjectCheck,
}

impl Command {
    fn run(&self, cfg: &Config) -> Result<(Table, Summary), CliError> {
        use commands::*;
        match self {
            Command::MlValidate => ml_validate::run(cfg),
            Command::HankelRatio => hankel_ratio::run(cfg),
            Command::Compactness => compactness::run(cfg),
            Command::LaplaceCheck => laplace::run(cfg),
            Command::KernelNorms => kernel_norms::run(cfg),
            Command::Fejer => fejer::run(cfg),
            Command::ProjectCheck => project_check::run(cfg),
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(out) = &cli.out {
        cfg.set("output.path", out.to_string_lossy());
    }
    if let Some(format) = &cli.format {
        cfg.set("output.format", format.as_str());
    }
    if let Some(seed) = cli.seed {
        cfg.set("seed", seed.to_string());
    }
    if let Some(jobs) = cli.jobs {
        cfg.set("jobs", jobs.to_string());
    }
    let format: Format = cfg
        .raw("output.format")
        .unwrap_or("csv")
        .parse()
        .map_err(|e| CliError::Config(format!("key `output.format`: {e}")))?;
    cfg.seed()?;
    if let Some(jobs) = cfg.get_opt::<usize>("jobs")? {
        if jobs == 0 {
            return Err(CliError::Config("key `jobs`: need at least one thread".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("key `jobs`: {e}")))?;
    }
    // A path from the command line is relative to the working directory.
    let out = cli.out.clone().or_else(|| cfg.path("output.path"));

    let (table, mut summary) = cli.command.run(&cfg)?;
    summary.finalize();
    output::emit(&table, &summary, format, out.as_deref())?;
    Ok(summary.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("focklab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
