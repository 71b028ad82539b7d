//! Transfer from the best source: one source secretly equals the target, the
//! others sit at least 2δ away. Half the budget goes to the sources, and the
//! target half picks among their projected OLS fits.
//!
//! ```bash
//! cargo run --release --example source_selection
//! ```

use currlab::metrics::excess_risk;
use currlab::problems::gen_identical_source_problem;
use currlab::schedulers::{collect, source_selection_estimate, source_selection_plan, FixedScheduler};
use currlab::estimators::ols;
use currlab::RngStream;

fn main() -> currlab::Result<()> {
    let (d, t, n, reps) = (20, 6, 1200, 20);
    let mut sigma2 = vec![0.1; t];
    sigma2[t - 1] = 5.0;

    let (mut ss_sum, mut ols_sum, mut hits) = (0.0, 0.0, 0);
    println!("{:>4} {:>7} {:>7} {:>12} {:>12}", "rep", "hidden", "chosen", "selection", "target OLS");
    for rep in 0..reps {
        let p = gen_identical_source_problem(d, t, 0.5, &sigma2, &mut RngStream::new(1, rep))?;
        let plan = source_selection_plan(n, t)?;
        let st = collect(&p, &mut FixedScheduler::new("source_selection", plan), n, &RngStream::new(2, rep))?;
        let (chosen, est) = source_selection_estimate(&st.buffers, p.bounds().c2)?;

        // the same budget spent on the target alone
        let target_only = p.sample(t - 1, n, &mut RngStream::new(3, rep))?;
        let base = ols(&target_only)?;

        let (a, b) = (excess_risk(&est, &p)?, excess_risk(&base, &p)?);
        ss_sum += a;
        ols_sum += b;
        hits += usize::from(Some(chosen) == p.hidden_source());
        println!("{rep:>4} {:>7} {chosen:>7} {a:>12.5} {b:>12.5}", p.hidden_source().unwrap_or(usize::MAX));
    }
    println!(
        "mean excess risk: selection {:.5}, target OLS {:.5}; hidden source found {hits}/{reps}",
        ss_sum / reps as f64,
        ols_sum / reps as f64
    );
    Ok(())
}
