//! Calibrating the confidence-width multiplier α: doubling search until the
//! balls around the two-phase estimates cover the true task parameters,
//! then a check on fresh seeds.
//!
//! ```bash
//! cargo run --release --example calibrate_alpha
//! ```

use currlab::harness::{calibrate_alpha, coverage_events, ExperimentConfig};

fn main() -> currlab::Result<()> {
    for sigma2 in [0.0, 0.25, 1.0, 4.0] {
        let cfg = ExperimentConfig::from_text(&format!(
            r#"{{"problem": {{"kind": "hard_diversity", "d": 6, "T": 12, "k": 3, "sigma2": {sigma2}}},
                "n": 1200, "reps": 50, "constants.delta": 0.1}}"#
        ))?;
        let cal = calibrate_alpha(&cfg, None)?;
        let fresh = coverage_events(&cfg, 1000..1100)?;
        let trail: Vec<String> = cal.trail.iter().map(|(a, c)| format!("{a}:{c:.3}")).collect();
        println!(
            "sigma2 {sigma2:<5} alpha {:<4} coverage {:.4} (fresh seeds {:.4})  trail [{}]",
            cal.alpha,
            cal.coverage,
            fresh.coverage(cal.alpha),
            trail.join(" ")
        );
    }
    Ok(())
}
