//! One verdict line per acceptance criterion; the test fails if any does.

mod support;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use currlab::harness::{self, ExperimentConfig};
use currlab::metrics::{self, purpose, Algorithm};
use currlab::numerics::{sym_eigen, RankOneSpectrum};
use currlab::problems::{gen_random_problem, CovarianceMode, Problem, TaskSpec};
use currlab::schedulers::{collect, oracle_fixed_for, source_selection_estimate, FixedScheduler, SchedulerSpec};
use currlab::sgd::{gain_for_sample, prediction_gain, GainMode, SgdState, StepRule};
use currlab::{AnyProblem, RngStream};
use rand::seq::SliceRandom;
use rand::Rng;
use support::*;

fn config(name: &str) -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    ExperimentConfig::load(&path).unwrap()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn reproduction() -> (bool, String) {
    let start = Instant::now();
    let r = harness::reproduce_paper(7, 200, "gain_accurate").unwrap();
    let secs = start.elapsed().as_secs_f64();
    let (g, f) = (r.gain.mse.mean, r.fixed.mse.mean);
    let band = |m: f64| (5e-4..=2e-2).contains(&m);
    let ratio = r.ratio();
    let pass = g < f && band(g) && band(f) && (0.3..=1.0).contains(&ratio) && secs <= 60.0;
    let detail = format!(
        "gain {g:.6} ± {:.6}, fixed {f:.6} ± {:.6}, ratio {ratio:.3} (band [0.3, 1]), {secs:.1} s (limit 60)",
        r.gain.mse.stderr, r.fixed.mse.stderr
    );
    (pass, detail)
}

fn ols_law() -> (bool, String) {
    let start = Instant::now();
    let th = normals(&mut rng(21), 3);
    let p: AnyProblem = Problem::new(vec![TaskSpec::isotropic(th, 1.0).unwrap()], Default::default()).unwrap().into();
    let m = metrics::mc_risk(&p, &SchedulerSpec::Uniform, Algorithm::TargetOls, 100, 2000, 21).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let want = ols_risk(3, 1.0, 100);
    let rel = (m.mean / want - 1.0).abs();
    (rel <= 0.15 && secs <= 10.0, format!("mean {:.5} vs 3/96 = {want:.5}, off by {:.1}% (limit 15%), {secs:.2} s", m.mean, 100.0 * rel))
}

fn source_selection_regime() -> (bool, String) {
    let cfg = config("identical_source.json");
    assert_eq!((cfg.problem.d, cfg.problem.t, cfg.n, cfg.reps), (20, 6, 1200, 200));
    let out = harness::run_experiment(&cfg).unwrap();
    let (ss, ols) = (&out.summaries[0], &out.summaries[1]);
    assert_eq!((ss.scheduler.as_str(), ols.algorithm.as_str()), ("source_selection", "target_ols"));
    let mut hits = 0;
    for rep in 0..cfg.reps as u64 {
        let problem = cfg.build_problem(rep).unwrap();
        let p = problem.as_problem();
        let plan = currlab::schedulers::source_selection_plan(cfg.n, p.num_tasks()).unwrap();
        let samples = RngStream::for_parts(cfg.seed, &[rep, purpose::SAMPLES]);
        let st = collect(p, &mut FixedScheduler::new("ss", plan), cfg.n, &samples).unwrap();
        let (chosen, _) = source_selection_estimate(&st.buffers, p.bounds().c2).unwrap();
        hits += usize::from(Some(chosen) == p.hidden_source());
    }
    let rate = hits as f64 / cfg.reps as f64;
    let ratio = ss.excess_risk.mean / ols.excess_risk.mean;
    (
        ratio < 0.5 && rate >= 0.9,
        format!(
            "source selection {:.5} vs target OLS {:.5} (ratio {ratio:.3}, limit 0.5); hidden source picked in {:.1}% (limit 90%)",
            ss.excess_risk.mean,
            ols.excess_risk.mean,
            100.0 * rate
        ),
    )
}

fn ofu_diversity() -> (bool, String) {
    let mut cfg = config("hard_diversity.json");
    cfg.reps = 50;
    assert_eq!((cfg.problem.t, cfg.problem.k, cfg.n), (12, 3, 3000));
    let start = Instant::now();
    let out = harness::run_experiment(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let div = |name: &str| -> Vec<f64> {
        out.records.iter().filter(|r| r.scheduler == name).map(|r| r.diversity.unwrap()).collect()
    };
    let (ofu, uni) = (div("ofu"), div("uniform"));
    let ratio = mean(&ofu) / mean(&uni);
    let per_seed = ofu.iter().zip(&uni).filter(|(o, u)| **o >= 2.0 * **u).count();
    (
        ratio >= 2.0 && secs <= 300.0,
        format!(
            "mean λ/N ofu {:.4} vs uniform {:.4}, ratio {ratio:.2} (limit 2); {per_seed}/50 seeds at 2x; d = {}, {secs:.0} s (limit 300)",
            mean(&ofu),
            mean(&uni),
            cfg.problem.d
        ),
    )
}

fn decomposition() -> (bool, String) {
    let mut r = rng(22);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let d = 1 + r.random_range(0..5usize);
        let tasks = vec![
            TaskSpec::isotropic(normals(&mut r, d), uniform(&mut r, 0.0, 2.0)).unwrap(),
            TaskSpec::isotropic(normals(&mut r, d), 1.0).unwrap(),
        ];
        let p = Problem::new(tasks, Default::default()).unwrap();
        let mut s = SgdState::new(normals(&mut r, d), StepRule::InvDI);
        s.step_index = r.random_range(0..100usize);
        let x = normals(&mut r, d);
        let g = gain_for_sample(&s, 0, &p, &x, normal(&mut r)).unwrap();
        worst = worst.max((g.total - g.term_sum()).abs());
    }
    let mut worst_rel = 0.0f64;
    for (i, (eta, e, delta, s2)) in [(0.1, 1.0, 0.0, 0.5), (0.2, -0.8, 0.3, 1.0), (0.05, 2.0, -0.5, 0.1)].into_iter().enumerate() {
        let p = Problem::new(
            vec![TaskSpec::isotropic(vec![delta], s2).unwrap(), TaskSpec::isotropic(vec![0.0], 1.0).unwrap()],
            Default::default(),
        )
        .unwrap();
        let exp = prediction_gain(&SgdState::new(vec![e], StepRule::Constant(eta)), 0, &p, GainMode::Expectation).unwrap();
        let (mc, _) = gain_1d_mc(eta, e, delta, s2, 1_000_000, 30 + i as u64);
        worst_rel = worst_rel.max((exp.total - mc).abs() / mc.abs());
    }
    (
        worst <= 1e-8 && worst_rel <= 0.01,
        format!("identity gap {worst:.2e} over 1e4 steps (limit 1e-8); d=1 expectation vs 1e6-sample MC off by {:.2}% (limit 1%)", 100.0 * worst_rel),
    )
}

fn coverage() -> (bool, String) {
    let cfg = config("calibrate.json");
    let cal = harness::calibrate_alpha(&cfg, None).unwrap();
    let fresh = harness::coverage_events(&cfg, cfg.reps as u64..cfg.reps as u64 + 200).unwrap();
    let cov = fresh.coverage(cal.alpha);
    let target = 1.0 - cfg.constants.delta;
    (
        cov >= target,
        format!(
            "alpha {} from seeds 0..{}; coverage {cov:.4} on 200 fresh seeds ({} events, limit {target})",
            cal.alpha,
            cfg.reps,
            fresh.len()
        ),
    )
}

fn properties() -> (bool, String) {
    let mut r = rng(23);
    let mut fails = Vec::new();

    let mut weyl_ok = 0;
    for trial in 0..1000 {
        let n = 1 + trial % 6;
        let count = r.random_range(0..6usize);
        let a = random_psd(&mut r, n, count);
        let u = normals(&mut r, n);
        let before = sym_eigen(&to_matrix(&a)).unwrap().values;
        let after = sym_eigen(&to_matrix(&add_outer(&a, &u))).unwrap().values;
        let tol = 1e-9 * (1.0 + after[0].abs());
        let spec = RankOneSpectrum::new(sym_eigen(&to_matrix(&a)).unwrap());
        let ok = (0..n).all(|j| after[j] >= before[j] - tol && (spec.kth_largest(&u, j + 1) - after[j]).abs() <= 1e-7 * (1.0 + after[0]));
        weyl_ok += usize::from(ok);
    }
    if weyl_ok != 1000 {
        fails.push("weyl");
    }

    let mut eig_err = 0.0f64;
    for n in 1..=8 {
        for _ in 0..10 {
            let a = random_symmetric(&mut r, n);
            let got = sym_eigen(&to_matrix(&a)).unwrap().values;
            let want = bisection_eigenvalues(&a);
            eig_err = got.iter().zip(&want).fold(eig_err, |m, (g, w)| m.max((g - w).abs()));
        }
    }
    if eig_err > 1e-6 {
        fails.push("eigensolver");
    }

    let p: AnyProblem = currlab::problems::gen_hard_diversity_instance(
        4,
        5,
        2,
        1.0,
        currlab::problems::HardVariant::Base,
        0.3,
        &mut RngStream::new(23, 0),
    )
    .unwrap()
    .into();
    let runs: Vec<(SchedulerSpec, Algorithm)> = vec![
        (SchedulerSpec::Uniform, Algorithm::PooledOls),
        (SchedulerSpec::OracleFixed, Algorithm::PooledOls),
        (SchedulerSpec::SourceSelection, Algorithm::SourceSelection),
        (SchedulerSpec::Single(4), Algorithm::TargetOls),
        (SchedulerSpec::Ofu(currlab::schedulers::OfuParams::new(2)), Algorithm::TwoPhase { k: 2 }),
        (SchedulerSpec::PredictionGain(currlab::schedulers::GainSchedulerMode::Accurate), Algorithm::SgdFinal(StepRule::InvDI)),
        (
            SchedulerSpec::PredictionGain(currlab::schedulers::GainSchedulerMode::Estimated { validation_size: 20 }),
            Algorithm::SgdAverage(StepRule::InvDI),
        ),
    ];
    let mut conserved = 0;
    let mut total = 0;
    for (spec, alg) in &runs {
        for rep in 0..5 {
            let o = metrics::run_replication(&p, spec, *alg, 200, 23, rep).unwrap();
            total += 1;
            conserved += usize::from(o.schedule.is_consistent() && o.schedule.counts.iter().sum::<usize>() == 200);
        }
    }
    if conserved != total {
        fails.push("count conservation");
    }

    let s = p.structured().unwrap();
    let mut choices: Vec<usize> = (0..80).map(|_| r.random_range(0..5usize)).collect();
    let base = metrics::structured_diversity(s, &currlab::schedulers::Schedule::from_choices(choices.clone(), 5).unwrap()).unwrap();
    let mut perm_ok = 0;
    for _ in 0..200 {
        choices.shuffle(&mut r);
        let again = metrics::structured_diversity(s, &currlab::schedulers::Schedule::from_choices(choices.clone(), 5).unwrap()).unwrap();
        perm_ok += usize::from(again.lambda_nk == base.lambda_nk);
    }
    if perm_ok != 200 {
        fails.push("permutation invariance");
    }

    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"problem": {"kind": "hard_diversity", "d": 4, "T": 5, "k": 2, "sigma2": 0.3},
            "scheduler.kinds": ["ofu", "uniform", "oracle_fixed"],
            "scheduler.algorithms": ["two_phase", "two_phase", "pooled_ols"], "n": 200, "reps": 6, "seed": 23}"#,
    )
    .unwrap();
    let bytes: Vec<Vec<u8>> = [None, Some("1"), None]
        .iter()
        .enumerate()
        .map(|(i, threads)| {
            let dir = tmp.path().join(i.to_string());
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_currlab"));
            cmd.args(["run", "-c", cfg.to_str().unwrap(), "-o", dir.to_str().unwrap()]);
            if let Some(t) = threads {
                cmd.env(harness::THREADS_ENV, t);
            }
            let o = cmd.output().unwrap();
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            std::fs::read(dir.join("runs.csv")).unwrap()
        })
        .collect();
    let identical = bytes.windows(2).all(|w| w[0] == w[1]);
    if !identical {
        fails.push("byte-identical reruns");
    }

    (
        fails.is_empty(),
        format!(
            "weyl {weyl_ok}/1000, eigensolver max error {eig_err:.1e} (limit 1e-6), counts conserved {conserved}/{total}, \
             permutations {perm_ok}/200, reruns identical across thread counts: {identical}{}",
            if fails.is_empty() { String::new() } else { format!("; failed: {}", fails.join(", ")) }
        ),
    )
}

fn brute_force() -> (bool, String) {
    let (d, n, reps) = (3, 20, 1000);
    let noise = [[0.1, 1.0], [1.0, 1.0], [0.5, 2.0], [2.0, 0.5], [0.05, 4.0], [1.0, 0.1]];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (i, s2) in noise.iter().enumerate() {
        let p = gen_random_problem(d, 2, s2, 0.1f64.sqrt(), CovarianceMode::Identity, &mut RngStream::new(24, i as u64)).unwrap();
        let (t, plan) = oracle_fixed_for(&p, n).unwrap();
        let fixed = metrics::fixed_allocation_risk(&p, Algorithm::PooledOls, &plan.counts, reps, 24).unwrap();
        let best = metrics::brute_force_oracle(&p, Algorithm::PooledOls, n, reps, 24).unwrap();
        let ratio = fixed.mean / best.best_risk;
        worst = worst.max(ratio);
        parts.push(format!("{ratio:.2}(task {t}, best {:?})", best.best_counts));
    }
    (worst <= 2.0, format!("fixed/best over {} instances: {} (limit 2)", noise.len(), parts.join(" ")))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> (bool, String)); 8] = [
        ("1 five-task SGD reproduction", reproduction),
        ("2 OLS risk law", ols_law),
        ("3 source selection regime", source_selection_regime),
        ("4 optimistic scheduler diversity", ofu_diversity),
        ("5 prediction-gain decomposition", decomposition),
        ("6 calibrated confidence coverage", coverage),
        ("7 property suites", properties),
        ("8 brute-force oracle consistency", brute_force),
    ];
    let mut failed = Vec::new();
    for (id, check) in criteria {
        let (pass, detail) = check();
        verdict(id, pass, &detail);
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
