//! Ground-truth evaluation: excess risk, diversity, Monte Carlo risk and the
//! brute-force curriculum oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{ols, pooled_ols, two_phase_fit};
use crate::numerics::{sub_vec, sym_eigen, Matrix, RngStream};
use crate::problems::{AnyProblem, Problem, SampleBatch, StructuredProblem};
use crate::schedulers::{collect, source_selection_estimate, Schedule, SchedulerSpec, SchedulerState};
use crate::sgd::{run_sgd_curriculum, StepRule};

/// `(θ − θ_T*)ᵀ Σ_T (θ − θ_T*)`.
pub fn excess_risk(theta: &[f64], problem: &Problem) -> Result<f64> {
    let target = problem.target();
    if theta.len() != target.dim() {
        return Err(Error::InvalidInput(format!("estimate has length {}, expected {}", theta.len(), target.dim())));
    }
    let e = sub_vec(theta, &target.theta_star);
    Ok(target.cov.quad_form(&e).max(0.0))
}

/// Expected target square loss `L_T(θ) = G_T(θ) + σ_T²`.
pub fn target_loss(theta: &[f64], problem: &Problem) -> Result<f64> {
    Ok(excess_risk(theta, problem)? + problem.target().sigma2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskReport {
    pub excess_risk: f64,
    pub loss: f64,
    pub estimator_id: String,
    pub seed: u64,
    pub n_obs: usize,
}

impl RiskReport {
    pub fn evaluate(theta: &[f64], problem: &Problem, estimator_id: &str, seed: u64, n_obs: usize) -> Result<Self> {
        let excess_risk = excess_risk(theta, problem)?;
        Ok(Self {
            excess_risk,
            loss: excess_risk + problem.target().sigma2,
            estimator_id: estimator_id.into(),
            seed,
            n_obs,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityReport {
    /// `λ_k(Σ_i β_{t_i} β_{t_i}ᵀ)`.
    pub lambda_nk: f64,
    /// `λ_{N,k} / N`.
    pub normalized: f64,
    pub schedule: Schedule,
}

/// Diversity of a schedule on a low-rank problem.
pub fn diversity(problem: &AnyProblem, schedule: &Schedule) -> Result<DiversityReport> {
    match problem.structured() {
        Some(s) => structured_diversity(s, schedule),
        None => Err(Error::Unsupported("diversity needs a low-rank problem".into())),
    }
}

/// Diversity from the counts (the Gram does not depend on order).
pub fn structured_diversity(problem: &StructuredProblem, schedule: &Schedule) -> Result<DiversityReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidInput("empty schedule".into()));
    }
    if schedule.num_tasks() != problem.num_tasks() {
        return Err(Error::InvalidInput(format!(
            "schedule covers {} tasks, problem has {}",
            schedule.num_tasks(),
            problem.num_tasks()
        )));
    }
    let k = problem.rank();
    let mut gram = Matrix::zeros(k, k);
    for (beta, &c) in problem.betas().iter().zip(&schedule.counts) {
        if c > 0 {
            gram.add_outer(c as f64, beta, beta);
        }
    }
    let lambda_nk = sym_eigen(&gram)?.kth_largest(k).max(0.0);
    Ok(DiversityReport { lambda_nk, normalized: lambda_nk / schedule.len() as f64, schedule: schedule.clone() })
}

/// Estimator applied to the collected data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// OLS on all samples from all tasks.
    PooledOls,
    /// OLS on the target buffer.
    TargetOls,
    /// Projected per-source OLS, then empirical-loss selection on the target.
    SourceSelection,
    /// Low-rank two-phase estimate of the target.
    TwoPhase { k: usize },
    /// Last SGD iterate from `θ_0 = 0`, samples consumed in schedule order.
    SgdFinal(StepRule),
    /// Averaged SGD iterate.
    SgdAverage(StepRule),
}

impl Algorithm {
    pub fn label(&self) -> String {
        match self {
            Algorithm::PooledOls => "pooled_ols".into(),
            Algorithm::TargetOls => "target_ols".into(),
            Algorithm::SourceSelection => "source_selection".into(),
            Algorithm::TwoPhase { k } => format!("two_phase:{k}"),
            Algorithm::SgdFinal(r) => format!("sgd_final:{}", r.label()),
            Algorithm::SgdAverage(r) => format!("sgd_average:{}", r.label()),
        }
    }

    pub fn is_sgd(&self) -> bool {
        matches!(self, Algorithm::SgdFinal(_) | Algorithm::SgdAverage(_))
    }

    /// Estimate of the target parameter from per-task buffers. SGD variants
    /// replay `choices` in order.
    pub fn estimate(
        &self,
        problem: &Problem,
        buffers: &[SampleBatch],
        choices: &[usize],
        rng: &mut RngStream,
    ) -> Result<Vec<f64>> {
        match *self {
            Algorithm::PooledOls => pooled_ols(buffers),
            Algorithm::TargetOls => ols(&buffers[problem.target_index()]),
            Algorithm::SourceSelection => Ok(source_selection_estimate(buffers, problem.bounds().c2)?.1),
            Algorithm::TwoPhase { k } => {
                let fit = two_phase_fit(buffers, k, rng)?;
                Ok(fit.prediction(problem.target_index()))
            }
            Algorithm::SgdFinal(rule) | Algorithm::SgdAverage(rule) => {
                let mut cursor = vec![0usize; buffers.len()];
                let mut sgd = crate::sgd::SgdState::new(vec![0.0; problem.dim()], rule);
                for &t in choices {
                    let i = cursor[t];
                    cursor[t] += 1;
                    sgd.step(buffers[t].xs.row(i), buffers[t].ys[i]);
                }
                match self {
                    Algorithm::SgdFinal(_) => Ok(sgd.iterate),
                    _ => sgd.average(),
                }
            }
        }
    }
}

/// Result of one replication.
#[derive(Debug, Clone)]
pub struct RepOutcome {
    pub estimate: Vec<f64>,
    pub excess_risk: f64,
    pub schedule: Schedule,
}

/// Stream purposes within a replication.
pub mod purpose {
    pub const PROBLEM: u64 = 0;
    pub const SAMPLES: u64 = 1;
    pub const SCHEDULER: u64 = 2;
    pub const ESTIMATOR: u64 = 3;
}

/// One replication of `(scheduler, algorithm)` on `problem`.
///
/// Learner samples come from `(seed, rep, SAMPLES)` derived per task, so
/// different schedulers in the same replication see common random numbers.
/// Schedulers that need an SGD iterate drive the SGD learner directly; the
/// algorithm must then be an SGD variant.
pub fn run_replication(
    problem: &AnyProblem,
    scheduler: &SchedulerSpec,
    algorithm: Algorithm,
    n: usize,
    seed: u64,
    rep: u64,
) -> Result<RepOutcome> {
    let p = problem.as_problem();
    let samples = RngStream::for_parts(seed, &[rep, purpose::SAMPLES]);
    let mut sched = scheduler.build(problem, n, RngStream::for_parts(seed, &[rep, purpose::SCHEDULER]))?;
    let mut est_rng = RngStream::for_parts(seed, &[rep, purpose::ESTIMATOR]);
    let (estimate, schedule) = if scheduler.needs_sgd() {
        let (rule, average) = match algorithm {
            Algorithm::SgdFinal(r) => (r, false),
            Algorithm::SgdAverage(r) => (r, true),
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "scheduler {} drives an SGD learner; choose an sgd algorithm",
                    scheduler.name()
                )))
            }
        };
        let run = run_sgd_curriculum(p, sched.as_mut(), n, rule, &samples)?;
        (if average { run.averaged_iterate } else { run.final_iterate }, run.schedule)
    } else {
        let state: SchedulerState = collect(p, sched.as_mut(), n, &samples)?;
        let est = algorithm.estimate(p, &state.buffers, &state.choices, &mut est_rng)?;
        (est, state.schedule())
    };
    debug_assert!(schedule.is_consistent() && schedule.len() == n);
    Ok(RepOutcome { excess_risk: excess_risk(&estimate, p)?, estimate, schedule })
}

/// Mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub reps: usize,
}

impl MeanEstimate {
    /// Sums in index order so the result does not depend on thread count.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { mean: f64::NAN, stderr: f64::NAN, reps: 0 };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr, reps: n }
    }
}

/// Monte Carlo excess risk over `reps` replications with per-rep streams.
pub fn mc_risk(
    problem: &AnyProblem,
    scheduler: &SchedulerSpec,
    algorithm: Algorithm,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<MeanEstimate> {
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1".into()));
    }
    let values = (0..reps as u64)
        .into_par_iter()
        .map(|rep| run_replication(problem, scheduler, algorithm, n, seed, rep).map(|o| o.excess_risk))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeanEstimate::from_values(&values))
}

/// Largest number of curricula [`brute_force_oracle`] will enumerate.
pub const MAX_COMPOSITIONS: u128 = 100_000;

/// `C(N+T−1, T−1)`, saturating.
pub fn composition_count(n: usize, t: usize) -> u128 {
    if t == 0 {
        return 0;
    }
    let (top, r) = ((n + t - 1) as u128, (t - 1) as u128);
    let mut c: u128 = 1;
    for i in 0..r {
        c = c.saturating_mul(top - i) / (i + 1);
    }
    c
}

/// Every allocation of `n` samples across `t` tasks, in lexicographic order.
pub fn compositions(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(left - c, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t > 0 {
        rec(n, t, &mut Vec::with_capacity(t), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub best_counts: Vec<usize>,
    pub best_risk: f64,
    /// Every curriculum with its Monte Carlo risk, in enumeration order.
    pub risks: Vec<(Vec<usize>, f64)>,
}

/// Monte Carlo risk of a fixed allocation; replication `r` draws task `t`'s
/// samples from stream `(seed, r, t)` so allocations share random numbers.
pub fn fixed_allocation_risk(
    problem: &Problem,
    algorithm: Algorithm,
    counts: &[usize],
    reps: usize,
    seed: u64,
) -> Result<MeanEstimate> {
    if algorithm.is_sgd() {
        return Err(Error::Unsupported("fixed allocations have no sample order for SGD".into()));
    }
    if counts.len() != problem.num_tasks() {
        return Err(Error::InvalidInput(format!("{} counts for {} tasks", counts.len(), problem.num_tasks())));
    }
    let schedule = Schedule::from_counts(counts.to_vec());
    let values = (0..reps as u64)
        .map(|rep| {
            let buffers = counts
                .iter()
                .enumerate()
                .map(|(t, &c)| problem.sample(t, c, &mut RngStream::for_parts(seed, &[rep, t as u64])))
                .collect::<Result<Vec<_>>>()?;
            let mut rng = RngStream::for_parts(seed, &[rep, u64::MAX]);
            let est = algorithm.estimate(problem, &buffers, &schedule.choices, &mut rng)?;
            excess_risk(&est, problem)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeanEstimate::from_values(&values))
}

/// Enumerates every curriculum with `n` samples and returns the one of least
/// Monte Carlo risk; ties go to the lexicographically first.
pub fn brute_force_oracle(
    problem: &Problem,
    algorithm: Algorithm,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<OracleResult> {
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1".into()));
    }
    let count = composition_count(n, problem.num_tasks());
    if count > MAX_COMPOSITIONS {
        return Err(Error::TooLarge { count, limit: MAX_COMPOSITIONS });
    }
    let all = compositions(n, problem.num_tasks());
    let risks = all
        .into_par_iter()
        .map(|c| fixed_allocation_risk(problem, algorithm, &c, reps, seed).map(|m| (c, m.mean)))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, (_, r)) in risks.iter().enumerate() {
        if *r < risks[best].1 {
            best = i;
        }
    }
    let best_risk = risks[best].1;
    assert!(risks.iter().all(|(_, r)| best_risk <= *r));
    Ok(OracleResult { best_counts: risks[best].0.clone(), best_risk, risks })
}
