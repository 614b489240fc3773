//! `mz-sphere`: seeded experiments on the q-sphere.
//!
//! Exit status is 0 when every checked inequality holds, 1 when one fails
//! and 2 on invalid input.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mz_sphere::mz::Exponent;
use mz_sphere::rng::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "mz-sphere", version, about = "Marcinkiewicz-Zygmund experiments on the q-sphere")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Root seed; every random quantity derives from it.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample sizes and patch counts required by each sufficient condition.
    Budget(commands::BudgetArgs),
    /// Extremal eigenvalues of the sampled Gram matrix over repetitions.
    Eigs(commands::EigsArgs),
    /// Sandwich check on an equal-area partition with one interior point per patch.
    CheckDet(commands::CheckDetArgs),
    /// Sandwich check for i.i.d. points with occupancy weights.
    CheckRandom(commands::CheckRandomArgs),
    /// Numerical check of the localized kernel bounds.
    KernelBounds(commands::KernelBoundsArgs),
    /// Coupon-collector bound against simulation.
    Coupon(commands::CouponArgs),
    /// Equal-area partition layout.
    Partition(commands::PartitionArgs),
    /// Uniform points on the sphere.
    Sample(commands::SampleArgs),
}

pub(crate) fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: mz_sphere::MzError| e.to_string())
}

/// Rendered artifact plus whether every checked inequality held.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn run(cli: Cli) -> Result<Outcome, mz_sphere::MzError> {
    let g = &cli.global;
    match cli.command {
        Command::Budget(a) => commands::budget(&a, g.format),
        Command::Eigs(a) => commands::eigs(&a, g.seed, g.format),
        Command::CheckDet(a) => commands::check_det(&a, g.seed, g.format),
        Command::CheckRandom(a) => commands::check_random(&a, g.seed, g.format),
        Command::KernelBounds(a) => commands::kernel_bounds(&a, g.format),
        Command::Coupon(a) => commands::coupon(&a, g.seed, g.format),
        Command::Partition(a) => commands::partition(&a, g.format),
        Command::Sample(a) => commands::sample(&a, g.seed, g.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().expect("global pool is set once");
    }
    let out = cli.global.out.clone();
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("check failed");
        ExitCode::from(1)
    }
}
