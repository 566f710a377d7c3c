mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use semioval_core::Error;

use io::{Format, Run};

/// Semiovals and 2-blocking sets inside the Hermitian curve of PG(2,q²).
///
/// Exit status: 0 when every check passed, 1 when a verdict failed,
/// 2 on usage or parameter errors.
#[derive(Parser)]
#[command(name = "semioval", version)]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory receiving reports, point sets and manifest.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field constants, curve size and line census.
    Curve(commands::CurveArgs),
    /// Build a semioval from one of the constructions and verify it.
    Construct(commands::ConstructArgs),
    /// Verify a point-set file.
    Verify(commands::VerifyArgs),
    /// Fill sizes between a construction and the full curve.
    Spectrum(commands::SpectrumArgs),
    /// Exhaustive size spectrum of semiovals in the curve (q ≤ 3).
    Search(commands::SearchArgs),
    /// Partition of the curve into q+1 arcs.
    Decompose(commands::DecomposeArgs),
    /// Union of arcs covering every secant.
    Cover(commands::CoverArgs),
    /// Compare the arc-union bound with the earlier one.
    Bounds(commands::BoundsArgs),
    /// 2-blocking set from the fibre set and the arcs.
    Blocking2(commands::Blocking2Args),
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::InvariantViolation(_) | Error::DecompositionNotFound(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let result = (|| -> anyhow::Result<bool> {
        if let Some(n) = cli.threads {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
        let mut run = Run::new(cli.out.clone(), cli.format)?;
        let ok = match cli.command {
            Command::Curve(a) => commands::curve(a, &mut run)?,
            Command::Construct(a) => commands::construct_cmd(a, &mut run)?,
            Command::Verify(a) => commands::verify(a, &mut run)?,
            Command::Spectrum(a) => commands::spectrum(a, &mut run)?,
            Command::Search(a) => commands::search(a, &mut run)?,
            Command::Decompose(a) => commands::decompose(a, &mut run)?,
            Command::Cover(a) => commands::cover(a, &mut run)?,
            Command::Bounds(a) => commands::bounds(a, &mut run)?,
            Command::Blocking2(a) => commands::blocking2(a, &mut run)?,
        };
        run.finish(&argv, start.elapsed().as_secs_f64() * 1e3)?;
        Ok(ok)
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
