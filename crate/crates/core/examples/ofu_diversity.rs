//! Optimistic scheduling on the hard diversity instance: k orthogonal tasks
//! hidden among copies of one direction. Round robin wastes most samples on
//! the duplicates; the optimistic scheduler finds the missing directions.
//!
//! ```bash
//! cargo run --release --example ofu_diversity -- 5
//! ```

use currlab::metrics::{run_replication, Algorithm};
use currlab::problems::{gen_hard_diversity_instance, HardVariant};
use currlab::schedulers::{OfuParams, SchedulerSpec};
use currlab::{AnyProblem, RngStream};

fn main() -> currlab::Result<()> {
    let seeds: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let (d, t, k, lambda, sigma2, n) = (6, 12, 3, 1.0, 0.25, 3000);

    println!("hard instance: d = {d}, T = {t}, k = {k}, lambda = {lambda}, sigma2 = {sigma2}, N = {n}");
    println!("{:>4} {:>10} {:>10}  ofu counts", "seed", "ofu λ/N", "unif λ/N");
    for seed in 0..seeds {
        let p: AnyProblem =
            gen_hard_diversity_instance(d, t, k, lambda, HardVariant::Base, sigma2, &mut RngStream::new(seed, 0))?.into();
        let s = p.structured().expect("low-rank");
        let mut lam = Vec::new();
        let mut counts = Vec::new();
        for spec in [SchedulerSpec::Ofu(OfuParams::new(k)), SchedulerSpec::Uniform] {
            let out = run_replication(&p, &spec, Algorithm::TwoPhase { k }, n, seed, 0)?;
            lam.push(currlab::metrics::structured_diversity(s, &out.schedule)?.normalized);
            counts.push(out.schedule.counts);
        }
        println!("{seed:>4} {:>10.4} {:>10.4}  {:?}", lam[0], lam[1], counts[0]);
    }
    println!("tasks 0..{k} are the diverse ones; the rest duplicate task 0");
    Ok(())
}
