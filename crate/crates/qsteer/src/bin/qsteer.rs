//! CLI front end: synthesize, verify, and report on local-waveform
//! pulse schedules from a JSON job description.
//!
//! Exit codes: 0 success, 2 invalid config, 3 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qsteer::cli::{self, to_json_pretty};
use qsteer::config::JobConfig;
use qsteer::Error;

#[derive(Parser)]
#[command(name = "qsteer", version, about = "Local-waveform pulse synthesis for N-level state transitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the optimal-amplitude schedule (schedule.json, controls.csv)
    Synthesize {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config's output_dir
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize and verify with both propagators (trajectory.csv, report.json)
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the per-family performance table (table1.json, table1.txt)
    Table {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized synthesis/propagation round-trip check
    #[command(hide = true)]
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn load_job(config: &PathBuf, out: Option<PathBuf>) -> Result<(qsteer::config::Job, PathBuf), Error> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::InvalidInput(format!("config: cannot read {}: {e}", config.display())))?;
    let cfg = JobConfig::from_json(&text)?;
    let out_dir = out
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((cfg.validate()?, out_dir))
}

fn run() -> Result<ExitCode, Error> {
    match Cli::parse().command {
        Command::Synthesize { config, out } => {
            let (job, out_dir) = load_job(&config, out)?;
            let summary = cli::cmd_synthesize(&job, &out_dir)?;
            print!("{}", to_json_pretty(&summary));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config, out } => {
            let (job, out_dir) = load_job(&config, out)?;
            let report = cli::cmd_verify(&job, &out_dir)?;
            print!("{}", to_json_pretty(&report));
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "verification failed: numeric fidelity {} below {}",
                    report.numeric_fidelity,
                    cli::VERIFY_FIDELITY_THRESHOLD
                );
                ExitCode::from(3)
            })
        }
        Command::Table { config, out } => {
            let (job, out_dir) = load_job(&config, out)?;
            let reports = cli::cmd_table(&job, &out_dir)?;
            print!("{}", qsteer::performance::render_table(&reports));
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { seed, trials } => {
            let report = cli::cmd_selftest(seed, trials)?;
            print!("{}", to_json_pretty(&report));
            Ok(if report.failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err @ Error::InvalidInput(_)) | Err(err @ Error::DimensionMismatch { .. }) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
