mod support;

use currlab::estimators::*;
use currlab::numerics::{dist_sq, random_orthonormal, subspace_distance, Matrix};
use currlab::problems::*;
use currlab::schedulers::{collect, source_selection_plan, FixedScheduler};
use currlab::RngStream;
use support::*;

fn ols_errors(d: usize, sigma2: f64, n: usize, reps: u64, seed: u64) -> Vec<f64> {
    (0..reps)
        .map(|rep| {
            let p = gen_random_problem(d, 1, &[sigma2], 1.0, CovarianceMode::Identity, &mut RngStream::new(seed, rep)).unwrap();
            let b = p.sample(0, n, &mut RngStream::new(seed + 1, rep)).unwrap();
            dist_sq(&ols(&b).unwrap(), &p.target().theta_star)
        })
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn ols_risk_is_near_classical_rate() {
    let m = mean(&ols_errors(3, 0.1, 200, 200, 1));
    let rate = 3.0 * 0.1 / 200.0;
    assert!(m > rate / 3.0 && m < rate * 3.0, "{m} vs {rate}");
}

#[test]
fn ols_risk_halves_when_data_doubles() {
    let a = mean(&ols_errors(3, 1.0, 50, 500, 2));
    let b = mean(&ols_errors(3, 1.0, 100, 500, 3));
    let ratio = a / b;
    assert!((1.6..=2.4).contains(&ratio), "ratio {ratio}");
    // both agree with the exact finite-sample formula
    assert!((a / ols_risk(3, 1.0, 50) - 1.0).abs() < 0.15);
}

#[test]
fn underdetermined_ols_is_minimum_norm() {
    let b = SampleBatch::new(0, Matrix::from_rows(&[vec![1.0, 1.0, 0.0]]).unwrap(), vec![2.0]).unwrap();
    let th = ols(&b).unwrap();
    assert!((th[0] - 1.0).abs() < 1e-12 && (th[1] - 1.0).abs() < 1e-12 && th[2].abs() < 1e-12);
}

#[test]
fn projection_never_exceeds_radius() {
    let mut r = rng(4);
    for _ in 0..500 {
        let th = normals(&mut r, 4).iter().map(|v| v * 3.0).collect::<Vec<_>>();
        let c2 = uniform(&mut r, 0.1, 5.0);
        let p = project_ball(&th, c2);
        assert!(p.iter().map(|v| v * v).sum::<f64>().sqrt() <= c2 * (1.0 + 1e-12));
    }
    assert_eq!(project_ball(&[3.0, 4.0], 1.0), vec![0.6, 0.8]);
}

#[test]
fn source_selection_finds_the_hidden_source() {
    let (n, t, d) = (1000, 5, 5);
    let mut hits = 0;
    for rep in 0..200u64 {
        let p = gen_identical_source_problem(d, t, 0.5, &[1.0; 5], &mut RngStream::new(10, rep)).unwrap();
        let mut sched = FixedScheduler::new("source_selection", source_selection_plan(n, t).unwrap());
        let st = collect(&p, &mut sched, n, &RngStream::new(11, rep)).unwrap();
        let candidates: Vec<Vec<f64>> = st.buffers[..t - 1].iter().map(|b| ols(b).unwrap()).collect();
        let chosen = select_source(&candidates, &st.buffers[t - 1]).unwrap();
        assert!(chosen < t - 1);
        hits += usize::from(chosen == p.hidden_source().unwrap());
    }
    assert!(hits >= 190, "{hits}/200");
}

fn structured(d: usize, t: usize, k: usize, sigma2: f64, seed: u64) -> StructuredProblem {
    let mut rng = RngStream::new(seed, 0);
    let b = random_orthonormal(d, k, &mut rng).unwrap();
    let betas: Vec<Vec<f64>> = (0..t).map(|_| rng.normals(k)).collect();
    let c5 = betas.iter().map(|b| b.iter().map(|v| v * v).sum::<f64>()).fold(0.0, f64::max);
    let bounds = StructuredBounds { c0: 1.0, c1: 1.0, c4: 1.0, c5 };
    StructuredProblem::new(b, betas, sigma2, Matrix::identity(d), bounds, None).unwrap()
}

fn batches(p: &StructuredProblem, n: usize, seed: u64) -> Vec<SampleBatch> {
    (0..p.num_tasks()).map(|t| p.sample(t, n, &mut RngStream::new(seed, t as u64)).unwrap()).collect()
}

#[test]
fn predictions_are_invariant_to_warm_start_rotation() {
    let p = structured(6, 5, 2, 0.5, 20);
    let bs = batches(&p, 40, 21);
    let als = AlsConfig { random_restarts: 0, ..AlsConfig::default() };
    let start = random_orthonormal(6, 2, &mut RngStream::new(22, 0)).unwrap();
    let base = two_phase_fit_with(&bs, 2, &als, Some(&start), &mut RngStream::new(0, 0)).unwrap();
    let angle: f64 = 0.7;
    let rot = Matrix::from_rows(&[vec![angle.cos(), -angle.sin()], vec![angle.sin(), angle.cos()]]).unwrap();
    let scale = Matrix::from_rows(&[vec![2.0, 0.3], vec![0.0, 0.5]]).unwrap();
    let warm = start.matmul(&rot).matmul(&scale);
    let again = two_phase_fit_with(&bs, 2, &als, Some(&warm), &mut RngStream::new(0, 0)).unwrap();
    for t in 0..5 {
        let gap = dist_sq(&base.prediction(t), &again.prediction(t)).sqrt();
        assert!(gap <= 1e-6, "task {t}: {gap}");
    }
    assert!(subspace_distance(&base.b_hat, &again.b_hat).unwrap() <= 1e-6);
}

#[test]
fn zero_noise_sets_contain_the_truth() {
    let p = structured(5, 4, 2, 0.0, 30);
    let bs = batches(&p, 60, 31);
    let fit = two_phase_fit(&bs, 2, &mut RngStream::new(1, 0)).unwrap();
    let params = WidthParams { alpha: 1.0, c0: 1.0, c1: 1.0, c5: 1.0, sigma2: 0.0, d: 5, k: 2, n_total: 240, t_count: 4, delta: 0.1 };
    let sets = build_confidence_sets(&fit, &[60; 4], &params).unwrap();
    assert_eq!(sets.len(), 4);
    for (t, s) in sets.iter().enumerate() {
        assert!(s.contains(p.theta(t)), "task {t}: {}", dist_sq(&s.center, p.theta(t)));
    }
}

#[test]
fn widths_fall_as_counts_grow() {
    let p = structured(5, 3, 2, 1.0, 40);
    let bs = batches(&p, 80, 41);
    let fit = two_phase_fit(&bs, 2, &mut RngStream::new(2, 0)).unwrap();
    let params = WidthParams { alpha: 1.0, c0: 1.0, c1: 1.0, c5: 2.0, sigma2: 1.0, d: 5, k: 2, n_total: 240, t_count: 3, delta: 0.1 };
    let sets = build_confidence_sets(&fit, &[10, 20, 40], &params).unwrap();
    assert!(sets[0].width > sets[1].width && sets[1].width > sets[2].width);
    assert!((sets[0].width / sets[1].width - 2.0).abs() < 1e-12);
    assert!(sets.iter().enumerate().all(|(t, s)| s.task_index == t && s.width > 0.0));
}
