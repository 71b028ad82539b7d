//! One SGD run under the prediction-gain scheduler with the per-step gain
//! split into its absolute, noise-bias and alignment terms.
//!
//! ```bash
//! cargo run --release --example sgd_gain_decomposition
//! ```

use currlab::metrics::excess_risk;
use currlab::problems::{gen_random_problem, CovarianceMode};
use currlab::schedulers::{GainSchedulerMode, SchedulerSpec};
use currlab::sgd::{prediction_gain, run_sgd_curriculum, GainMode, SgdState, StepRule};
use currlab::{AnyProblem, RngStream};

fn main() -> currlab::Result<()> {
    let sigma2 = [0.05, 0.1, 0.5, 1.0, 2.0];
    let p = gen_random_problem(3, 5, &sigma2, 0.1f64.sqrt(), CovarianceMode::Identity, &mut RngStream::new(7, 0))?;
    let any = AnyProblem::from(p.clone());
    println!("distances to target: {:.3?}", p.distances_to_target());

    // expected gain of each task from the zero iterate
    let start = SgdState::new(vec![0.0; 3], StepRule::InvDI);
    for t in 0..5 {
        let g = prediction_gain(&start, t, &p, GainMode::Expectation)?;
        println!(
            "task {t}: total {:+.4} = absolute {:+.4} + noise/bias {:+.4} + alignment {:+.4}",
            g.total, g.absolute_term, g.noise_bias_term, g.alignment_term
        );
    }

    let n = 1000;
    let mut sched = SchedulerSpec::PredictionGain(GainSchedulerMode::Accurate).build(&any, n, RngStream::new(7, 1))?;
    let run = run_sgd_curriculum(&p, sched.as_mut(), n, StepRule::InvDI, &RngStream::new(7, 2))?;
    println!("\n{:>5} {:>4} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}", "step", "task", "eta", "gain", "abs", "noise", "align", "risk");
    for row in run.trace.iter().filter(|r| r.step < 5 || r.step % 200 == 0) {
        println!(
            "{:>5} {:>4} {:>8.5} {:>+10.5} {:>+10.5} {:>+10.5} {:>+10.5} {:>10.6}",
            row.step, row.task, row.eta, row.gain_total, row.absolute_term, row.noise_bias_term, row.alignment_term, row.excess_risk
        );
    }
    println!("\nselection counts {:?}", run.schedule.counts);
    println!(
        "final iterate risk {:.6}, averaged iterate risk {:.6}",
        excess_risk(&run.final_iterate, &p)?,
        excess_risk(&run.averaged_iterate, &p)?
    );
    Ok(())
}
