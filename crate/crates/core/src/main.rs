use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cog_core::cli::{self, SweepParam};
use cog_core::scenario::load_scenario;
use cog_core::{Error, Result};

/// Center of gravity of a partially filled solid of revolution.
#[derive(Debug, Parser)]
#[command(name = "cog", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// T(h), T'(h), m0 and m1 at one fill level.
    Eval {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long)]
        json: bool,
    },
    /// Fill level with the lowest center of gravity.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sampled curve as CSV (h,T,dT,m0,m1).
    Curve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Re-solve while varying one parameter (alpha, beta, M, m, R, r, H, p).
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the consistency checks; exit 1 if any fails.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Eval { scenario, h, json } => {
            let report = cli::eval(&load_scenario(scenario)?, h)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Error::Validation(e.to_string()))?);
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Solve { scenario, json } => {
            let report = cli::solve(&load_scenario(scenario)?)?;
            if json {
                println!("{}", report.to_json()?);
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Curve { scenario, out, samples } => {
            let curve = cli::curve(&load_scenario(scenario)?, samples)?;
            write_file(&out, &cli::curve_csv(&curve))?;
        }
        Command::Sweep { scenario, param, from, to, steps, out } => {
            let param: SweepParam = param.parse()?;
            let rows = cli::sweep(&load_scenario(scenario)?, param, from, to, steps)?;
            write_file(&out, &cli::sweep_csv(param, &rows))?;
        }
        Command::Verify { scenario } => {
            let report = cli::verify(&load_scenario(scenario)?)?;
            print!("{}", report.to_text());
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
