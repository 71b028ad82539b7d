//! Enumerates every allocation of N samples over two tasks and compares the
//! best one with the closed-form single-task choice.
//!
//! ```bash
//! cargo run --release --example brute_force_oracle
//! ```

use currlab::metrics::{brute_force_oracle, fixed_allocation_risk, Algorithm};
use currlab::problems::{gen_random_problem, CovarianceMode};
use currlab::schedulers::oracle_fixed_for;
use currlab::RngStream;

fn main() -> currlab::Result<()> {
    let (n, reps) = (20, 1000);
    let p = gen_random_problem(3, 2, &[0.05, 4.0], 0.1f64.sqrt(), CovarianceMode::Identity, &mut RngStream::new(24, 4))?;
    println!("source at distance {:.3}, noise {:?}", p.distances_to_target()[0], p.sigma2s());

    let best = brute_force_oracle(&p, Algorithm::PooledOls, n, reps, 1)?;
    let worst = best.risks.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    for (counts, risk) in &best.risks {
        let bar = "#".repeat((risk / worst * 50.0) as usize);
        println!("{counts:?} {risk:>9.5} {bar}");
    }
    let (t, plan) = oracle_fixed_for(&p, n)?;
    let fixed = fixed_allocation_risk(&p, Algorithm::PooledOls, &plan.counts, reps, 1)?;
    println!(
        "best {:?} at {:.5}; single-task rule picks task {t} at {:.5} ({:.2}x)",
        best.best_counts,
        best.best_risk,
        fixed.mean,
        fixed.mean / best.best_risk
    );
    Ok(())
}
