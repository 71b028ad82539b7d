//! Five-task SGD experiment: prediction-gain scheduling against the best
//! single task, averaged over seeds.
//!
//! ```bash
//! cargo run --release --example reproduce_experiment -- 200 7
//! ```

use currlab::harness::reproduce_paper;

fn main() -> currlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let reps = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);

    for gain in ["gain_accurate", "gain_accurate_lookahead", "gain_estimated"] {
        let report = reproduce_paper(seed, reps, gain)?;
        print!("{}", report.render());
        println!();
    }
    Ok(())
}
