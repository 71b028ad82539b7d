use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use currlab::harness::{self, ExperimentConfig, SweepAxis};
use currlab::Error;

#[derive(Parser)]
#[command(name = "currlab", version, about = "Curriculum-learning simulation lab")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a config.
    ///
    /// Writes runs.csv with columns rep, seed, config_hash, scheduler,
    /// algorithm, n, excess_risk, mse, lambda_nk, diversity, counts (one row
    /// per replication and scheduler; counts are `;`-separated), and
    /// summary.json with the resolved config, its hash and per-scheduler
    /// means.
    Run {
        #[arg(short, long)]
        config: PathBuf,
        /// Output directory (defaults to the config's `output`).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Five-task SGD experiment: prediction-gain scheduler vs the oracle fixed task.
    ReproducePaper {
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Prediction-gain scheduler: gain_accurate, gain_accurate_sampled,
        /// gain_accurate_lookahead or gain_estimated.
        #[arg(long, default_value = "gain_accurate")]
        gain: String,
        /// Also write runs.csv and summary.json here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smallest power-of-two alpha whose confidence sets reach the target coverage.
    CalibrateAlpha {
        #[arg(short, long)]
        config: PathBuf,
        /// Target coverage (defaults to 1 - constants.delta).
        #[arg(long)]
        target: Option<f64>,
    },
    /// Run a config once per axis value.
    ///
    /// Writes a long-format CSV with columns axis, value, scheduler,
    /// algorithm, metric, mean, stderr, reps.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        /// N, T, sigma or alpha.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
        /// Output CSV (defaults to `<output>/sweep.csv`).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Run { config, output } => {
            let out = harness::cmd_run(&config, output.as_deref())?;
            for s in &out.summaries {
                println!(
                    "{:<26} excess risk {:.6} ± {:.6}  mse {:.6}",
                    s.scheduler, s.excess_risk.mean, s.excess_risk.stderr, s.mse.mean
                );
            }
        }
        Cmd::ReproducePaper { reps, seed, gain, output } => {
            let report = harness::reproduce_paper(seed, reps, &gain)?;
            print!("{}", report.render());
            if let Some(dir) = output {
                harness::write_run(&report.run, &dir)?;
            }
        }
        Cmd::CalibrateAlpha { config, target } => {
            let cfg = ExperimentConfig::load(&config)?;
            let c = harness::calibrate_alpha(&cfg, target)?;
            for (alpha, cov) in &c.trail {
                println!("alpha {alpha:>9}  coverage {cov:.4}");
            }
            println!("alpha = {}  coverage = {:.4}  target = {:.4}  events = {}", c.alpha, c.coverage, c.target, c.events);
        }
        Cmd::Sweep { config, axis, values, output } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = harness::sweep(&cfg, SweepAxis::parse(&axis)?, &harness::parse_values(&values)?)?;
            let path = output.unwrap_or_else(|| cfg.output.join("sweep.csv"));
            harness::write_sweep(&rows, &path)?;
            println!("{} rows written to {}", rows.len(), path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::exit_code(&e) as u8)
        }
    }
}
