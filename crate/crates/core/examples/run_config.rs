//! Runs a JSON config the way `currlab run` does, then sweeps its budget.
//!
//! ```bash
//! cargo run --release --example run_config -- configs/sgd_curriculum.json
//! ```

use std::path::PathBuf;

use currlab::harness::{run_experiment, sweep, write_run, ExperimentConfig, SweepAxis};

fn main() -> currlab::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "configs/sgd_curriculum.json".into());
    let mut cfg = ExperimentConfig::load(&path)?;
    cfg.reps = cfg.reps.min(50);
    println!("config {} hash {}", path.display(), cfg.hash());

    let out = run_experiment(&cfg)?;
    for s in &out.summaries {
        println!(
            "{:<24} {:<20} risk {:.5} ± {:.5}  freq {:.2?}",
            s.scheduler, s.algorithm, s.excess_risk.mean, s.excess_risk.stderr, s.selection_frequencies
        );
    }
    let dir = std::env::temp_dir().join("currlab_run_config");
    let (csv, json) = write_run(&out, &dir)?;
    println!("wrote {} and {}", csv.display(), json.display());

    let base = cfg.n as f64;
    for row in sweep(&cfg, SweepAxis::N, &[base / 4.0, base / 2.0, base])? {
        println!("N = {:<6} {:<24} {} {:.5}", row.value, row.scheduler, row.metric, row.estimate.mean);
    }
    Ok(())
}
