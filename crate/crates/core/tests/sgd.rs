mod support;

use currlab::problems::{Bounds, Problem, TaskSpec};
use currlab::schedulers::{FixedScheduler, Schedule, SchedulerSpec, GainSchedulerMode};
use currlab::sgd::*;
use currlab::{AnyProblem, RngStream};
use rand::Rng;
use support::*;

fn problem(thetas: &[Vec<f64>], sigma2: &[f64]) -> Problem {
    let tasks = thetas.iter().zip(sigma2).map(|(t, &s)| TaskSpec::isotropic(t.clone(), s).unwrap()).collect();
    Problem::new(tasks, Bounds::identity()).unwrap()
}

#[test]
fn update_matches_recursion_form() {
    let mut r = rng(1);
    for _ in 0..1000 {
        let d = 1 + (r.random_range(0..5usize));
        let theta_t = normals(&mut r, d);
        let theta_target = normals(&mut r, d);
        let x = normals(&mut r, d);
        let eps = normal(&mut r);
        let state = SgdState::new(normals(&mut r, d), StepRule::Constant(uniform(&mut r, 0.01, 0.5)));
        let eta = state.next_eta();
        let y: f64 = x.iter().zip(&theta_t).map(|(a, b)| a * b).sum::<f64>() + eps;
        let next = sgd_step(&state, &x, y);
        let e: Vec<f64> = state.iterate.iter().zip(&theta_target).map(|(a, b)| a - b).collect();
        let shift: Vec<f64> = theta_t.iter().zip(&theta_target).map(|(a, b)| a - b).collect();
        let xe: f64 = x.iter().zip(&e).map(|(a, b)| a * b).sum();
        let xs: f64 = x.iter().zip(&shift).map(|(a, b)| a * b).sum();
        for i in 0..d {
            let want = e[i] - eta * x[i] * xe + eta * x[i] * (eps + xs);
            assert!((next.iterate[i] - theta_target[i] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }
}

#[test]
fn running_sum_and_average_replay() {
    let mut r = rng(2);
    let mut s = SgdState::new(vec![0.0; 3], StepRule::InvDI);
    let mut iterates = Vec::new();
    for _ in 0..200 {
        let x = normals(&mut r, 3);
        s.step(&x, normal(&mut r));
        iterates.push(s.iterate.clone());
    }
    for i in 0..3 {
        let sum: f64 = iterates.iter().map(|v| v[i]).sum();
        assert!((s.iterate_sum[i] - sum).abs() <= 1e-12 * (1.0 + sum.abs()));
        assert!((s.average().unwrap()[i] - sum / 200.0).abs() <= 1e-12);
    }
    // zero residual leaves the iterate put, so the average is that constant
    let theta = vec![0.3, -1.2];
    let mut c = SgdState::new(theta.clone(), StepRule::InvI);
    for _ in 0..10 {
        let x = normals(&mut r, 2);
        let y = x[0] * theta[0] + x[1] * theta[1];
        c.step(&x, y);
    }
    assert!(c.average().unwrap().iter().zip(&theta).all(|(a, b)| (a - b).abs() < 1e-12));
}

#[test]
fn decomposition_identity_on_random_steps() {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let d = 1 + r.random_range(0..4usize);
        let p = problem(&[normals(&mut r, d), normals(&mut r, d)], &[uniform(&mut r, 0.0, 2.0), 1.0]);
        let mut s = SgdState::new(normals(&mut r, d), StepRule::InvDI);
        s.step_index = r.random_range(0..50usize);
        let x = normals(&mut r, d);
        let g = gain_for_sample(&s, 0, &p, &x, normal(&mut r)).unwrap();
        worst = worst.max((g.total - g.term_sum()).abs());
    }
    assert!(worst <= 1e-8, "{worst}");
}

#[test]
fn one_dimensional_expectation_matches_oracles() {
    for (eta, e, delta, s2) in [(0.1, 1.0, 0.0, 0.5), (0.2, -0.8, 0.3, 1.0), (0.05, 2.0, -0.5, 0.1), (0.3, 0.5, 0.2, 0.2)] {
        let p = problem(&[vec![delta], vec![0.0]], &[s2, 1.0]);
        let s = SgdState::new(vec![e], StepRule::Constant(eta));
        let g = prediction_gain(&s, 0, &p, GainMode::Expectation).unwrap();
        let closed = gain_1d(eta, e, delta, s2);
        assert!((g.total - closed).abs() <= 1e-12 * (1.0 + closed.abs()), "{} vs {closed}", g.total);
        let (mc, se) = gain_1d_mc(eta, e, delta, s2, 1_000_000, 7);
        assert!((g.total - mc).abs() <= 0.01 * mc.abs().max(1e-3), "{} vs mc {mc} ± {se}", g.total);
    }
}

#[test]
fn expectation_terms_match_sampled_means_in_higher_dimension() {
    let mut r = rng(4);
    let d = 3;
    let target = normals(&mut r, d);
    let source: Vec<f64> = target.iter().map(|v| v + 0.3 * normal(&mut r)).collect();
    let p = problem(&[source, target.clone()], &[0.4, 1.0]);
    let start: Vec<f64> = target.iter().map(|v| v + normal(&mut r)).collect();
    let s = SgdState::new(start, StepRule::Constant(0.1));
    let exp = prediction_gain(&s, 0, &p, GainMode::Expectation).unwrap();
    let n = 400_000;
    let mut sums = [0.0; 4];
    let mut stream = RngStream::new(5, 0);
    for _ in 0..n {
        let g = prediction_gain(&s, 0, &p, GainMode::Sampled(&mut stream)).unwrap();
        for (acc, v) in sums.iter_mut().zip([g.total, g.absolute_term, g.noise_bias_term, g.alignment_term]) {
            *acc += v / n as f64;
        }
    }
    let want = [exp.total, exp.absolute_term, exp.noise_bias_term, exp.alignment_term];
    for (m, w) in sums.iter().zip(want) {
        assert!((m - w).abs() <= 0.03 * w.abs().max(0.01), "{sums:?} vs {want:?}");
    }
}

#[test]
fn single_step_curriculum() {
    let p = problem(&[vec![1.0, 0.0], vec![0.0, 0.0]], &[0.5, 1.0]);
    let mut sched = FixedScheduler::new("one", Schedule::from_choices(vec![0], 2).unwrap());
    let run = run_sgd_curriculum(&p, &mut sched, 1, StepRule::InvI, &RngStream::new(1, 0)).unwrap();
    assert_eq!(run.trace.len(), 1);
    assert_eq!(run.final_iterate, run.averaged_iterate);
    assert_eq!(run.schedule.counts, vec![1, 0]);
    assert!((run.trace[0].gain_total - (run.trace[0].absolute_term + run.trace[0].noise_bias_term + run.trace[0].alignment_term)).abs() < 1e-10);
}

fn clean_task_risks(n: usize, rule: StepRule, seeds: u64, sigma2: f64) -> (Vec<f64>, Vec<f64>) {
    let mut last = Vec::new();
    let mut avg = Vec::new();
    for seed in 0..seeds {
        let theta = vec![0.5, -0.4, 0.2];
        let p = problem(&[theta.clone(), theta], &[sigma2, 1.0]);
        let mut sched = FixedScheduler::new("clean", Schedule::from_counts(vec![n, 0]));
        let run = run_sgd_curriculum(&p, &mut sched, n, rule, &RngStream::new(seed, 3)).unwrap();
        last.push(currlab::metrics::excess_risk(&run.final_iterate, &p).unwrap());
        avg.push(currlab::metrics::excess_risk(&run.averaged_iterate, &p).unwrap());
    }
    (last, avg)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn averaged_iterate_decays_on_clean_task() {
    let risks: Vec<f64> = [10, 100, 1000].iter().map(|&n| mean(&clean_task_risks(n, StepRule::InvI, 100, 0.0).1)).collect();
    assert!(risks[0] > risks[1] && risks[1] > risks[2], "{risks:?}");
}

#[test]
fn averaging_does_not_inflate_variance() {
    let n = 1000;
    let rule = StepRule::Constant(0.05);
    let seeds = 200;
    let var_of = |pick: fn(&currlab::sgd::CurriculumRun) -> Vec<f64>| -> f64 {
        let theta = vec![0.5, -0.4, 0.2];
        let p = problem(&[theta.clone(), theta], &[1.0, 1.0]);
        let ests: Vec<Vec<f64>> = (0..seeds)
            .map(|seed| {
                let mut sched = FixedScheduler::new("clean", Schedule::from_counts(vec![n, 0]));
                pick(&run_sgd_curriculum(&p, &mut sched, n, rule, &RngStream::new(seed, 4)).unwrap())
            })
            .collect();
        (0..3)
            .map(|i| {
                let m = ests.iter().map(|e| e[i]).sum::<f64>() / seeds as f64;
                ests.iter().map(|e| (e[i] - m).powi(2)).sum::<f64>() / (seeds - 1) as f64
            })
            .sum()
    };
    let last = var_of(|r| r.final_iterate.clone());
    let avg = var_of(|r| r.averaged_iterate.clone());
    assert!(avg <= last, "averaged {avg} vs last {last}");
}

#[test]
fn gain_scheduler_risk_tracks_averaged_rate() {
    // task 0 is a clean low-noise copy of the target, task 1 a shifted one
    let d = 3;
    let target = vec![0.4, -0.3, 0.5];
    let shifted: Vec<f64> = target.iter().map(|v| v + 0.6).collect();
    let s2_best = 1.0;
    let p = problem(&[target.clone(), shifted, target.clone()], &[s2_best, 0.05, 4.0]);
    let any = AnyProblem::from(p.clone());
    let c5: f64 = target.iter().map(|v| v * v).sum();
    let bound = |n: usize| (d as f64 * s2_best + c5) * (n as f64).ln() / n as f64;
    let spec = SchedulerSpec::PredictionGain(GainSchedulerMode::Accurate);
    let mut ratios = Vec::new();
    for n in [250, 500, 1000, 2000] {
        let mut risks = Vec::new();
        for seed in 0..200 {
            let mut sched = spec.build(&any, n, RngStream::new(seed, 9)).unwrap();
            let run = run_sgd_curriculum(&p, sched.as_mut(), n, StepRule::InvI, &RngStream::new(seed, 8)).unwrap();
            risks.push(currlab::metrics::excess_risk(&run.averaged_iterate, &p).unwrap());
        }
        ratios.push(mean(&risks) / bound(n));
    }
    let c = ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64;
    let c = c.exp();
    assert!(ratios.iter().all(|r| (0.5 * c..=1.5 * c).contains(r)), "c = {c}, ratios {ratios:?}");
}
