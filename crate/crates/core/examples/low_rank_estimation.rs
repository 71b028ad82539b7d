//! The two-phase low-rank estimator: fit a shared representation on one
//! half of every task's data, task coefficients on the other, then build
//! the per-task confidence balls.
//!
//! ```bash
//! cargo run --release --example low_rank_estimation
//! ```

use currlab::estimators::{build_confidence_sets, two_phase_fit, WidthParams};
use currlab::numerics::{dist_sq, subspace_distance};
use currlab::problems::{gen_hard_diversity_instance, HardVariant};
use currlab::RngStream;

fn main() -> currlab::Result<()> {
    let p = gen_hard_diversity_instance(8, 6, 2, 1.0, HardVariant::Block(2), 0.5, &mut RngStream::new(3, 0))?;
    for n in [20, 80, 320] {
        let batches = (0..p.num_tasks())
            .map(|t| p.sample(t, n, &mut RngStream::new(4, t as u64)))
            .collect::<currlab::Result<Vec<_>>>()?;
        let fit = two_phase_fit(&batches, 2, &mut RngStream::new(5, 0))?;
        let b = p.bounds();
        let width = WidthParams {
            alpha: 1.0,
            c0: b.c0,
            c1: b.c1,
            c5: b.c5,
            sigma2: p.sigma2(),
            d: p.dim(),
            k: 2,
            n_total: n * p.num_tasks(),
            t_count: p.num_tasks(),
            delta: 0.1,
        };
        let sets = build_confidence_sets(&fit, &vec![n; p.num_tasks()], &width)?;
        let covered = sets.iter().enumerate().filter(|(t, s)| s.contains(p.theta(*t))).count();
        let err: f64 = (0..p.num_tasks()).map(|t| dist_sq(&fit.prediction(t), p.theta(t))).sum::<f64>() / p.num_tasks() as f64;
        println!(
            "n/task {n:>4}: subspace distance {:.4}, mean squared error {err:.5}, radius {:.4}, covered {covered}/{}, ALS iters {}, sigma2 estimate {:.3}",
            subspace_distance(&fit.b_hat, p.b_star())?,
            sets[0].radius(),
            sets.len(),
            fit.objective_trace.len(),
            fit.residual_variance.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
