//! Single-sample SGD on the square loss, iterate averaging, and the one-step
//! prediction gain with its three-term decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{axpy, dot, sub_vec, RngStream};
use crate::problems::{Problem, SampleBatch};
use crate::schedulers::{Schedule, Scheduler, SchedulerState};

/// Step size `η_i` for the `i`-th update (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `1/i`
    InvI,
    /// `1/(d·i)`
    InvDI,
    Constant(f64),
}

impl StepRule {
    pub fn eta(&self, i: usize, d: usize) -> f64 {
        assert!(i >= 1, "step indices start at 1");
        match *self {
            StepRule::InvI => 1.0 / i as f64,
            StepRule::InvDI => 1.0 / (d * i) as f64,
            StepRule::Constant(c) => c,
        }
    }

    /// Parses `inv_i`, `inv_di` or `constant:<c>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "inv_i" => Ok(StepRule::InvI),
            "inv_di" => Ok(StepRule::InvDI),
            _ => match s.strip_prefix("constant:").map(str::parse::<f64>) {
                Some(Ok(c)) if c > 0.0 && c.is_finite() => Ok(StepRule::Constant(c)),
                _ => Err(Error::InvalidConfig(format!("unknown step rule `{s}`"))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            StepRule::InvI => "inv_i".into(),
            StepRule::InvDI => "inv_di".into(),
            StepRule::Constant(c) => format!("constant:{c}"),
        }
    }
}

/// SGD iterate with running sum for Polyak averaging.
///
/// `step_index` counts the updates taken so far; the next update uses
/// `η_{step_index + 1}` and produces `θ_{step_index + 1}`. The starting point
/// `θ_0` is not part of the average.
#[derive(Debug, Clone, PartialEq)]
pub struct SgdState {
    pub iterate: Vec<f64>,
    pub step_index: usize,
    pub iterate_sum: Vec<f64>,
    pub step_rule: StepRule,
}

impl SgdState {
    pub fn new(init: Vec<f64>, step_rule: StepRule) -> Self {
        let d = init.len();
        Self { iterate: init, step_index: 0, iterate_sum: vec![0.0; d], step_rule }
    }

    pub fn dim(&self) -> usize {
        self.iterate.len()
    }

    /// Step size the next update will use.
    pub fn next_eta(&self) -> f64 {
        self.step_rule.eta(self.step_index + 1, self.dim())
    }

    /// `θ ← θ + η x (y − xᵀθ)` in place.
    pub fn step(&mut self, x: &[f64], y: f64) {
        let eta = self.next_eta();
        let resid = y - dot(x, &self.iterate);
        axpy(eta * resid, x, &mut self.iterate);
        self.step_index += 1;
        for (s, v) in self.iterate_sum.iter_mut().zip(&self.iterate) {
            *s += v;
        }
    }

    /// `θ̄ = Σ_{j≤i} θ_j / i`.
    pub fn average(&self) -> Result<Vec<f64>> {
        if self.step_index == 0 {
            return Err(Error::InsufficientData("average of zero SGD steps".into()));
        }
        let n = self.step_index as f64;
        Ok(self.iterate_sum.iter().map(|s| s / n).collect())
    }
}

/// Pure form of [`SgdState::step`].
pub fn sgd_step(state: &SgdState, x: &[f64], y: f64) -> SgdState {
    let mut next = state.clone();
    next.step(x, y);
    next
}

/// One-step decrease of the target loss, `L_T(θ) − L_T(θ')`, split as
/// `absolute + noise_bias + alignment`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainBreakdown {
    pub total: f64,
    pub absolute_term: f64,
    pub noise_bias_term: f64,
    pub alignment_term: f64,
}

impl GainBreakdown {
    pub fn term_sum(&self) -> f64 {
        self.absolute_term + self.noise_bias_term + self.alignment_term
    }
}

pub enum GainMode<'a> {
    /// One virtual step on a fresh draw from the task.
    Sampled(&'a mut RngStream),
    /// Closed-form expectation over the draw; identity covariances only.
    Expectation,
}

/// Gain of the virtual update `θ' = θ + η x (y − xᵀθ)` with `y = xᵀθ_t* + ε`.
///
/// With `e = θ − θ_T*`, `A = I − η x xᵀ`, `s = ε + xᵀ(θ_t* − θ_T*)` and
/// `M = Σ_T`, the update is `θ' − θ_T* = A e + η s x`, giving
/// `absolute = eᵀMe − eᵀAMAe`, `noise_bias = −η² s² xᵀMx` and
/// `alignment = −2ηs eᵀAMx`. `total` is computed directly from `θ'`.
pub fn gain_for_sample(
    state: &SgdState,
    task: usize,
    problem: &Problem,
    x: &[f64],
    eps: f64,
) -> Result<GainBreakdown> {
    let spec = problem.task(task)?;
    let target = problem.target();
    let m = &target.cov;
    let eta = state.next_eta();
    let e = sub_vec(&state.iterate, &target.theta_star);
    let shift = sub_vec(&spec.theta_star, &target.theta_star);
    let s = eps + dot(x, &shift);

    let xe = dot(x, &e);
    let ae: Vec<f64> = e.iter().zip(x).map(|(ei, xi)| ei - eta * xe * xi).collect();
    let mx = m.matvec(x);
    let absolute_term = m.quad_form(&e) - m.quad_form(&ae);
    let noise_bias_term = -eta * eta * s * s * dot(x, &mx);
    let alignment_term = -2.0 * eta * s * dot(&ae, &mx);

    let y = dot(x, &spec.theta_star) + eps;
    let next = sgd_step(state, x, y);
    let e_next = sub_vec(&next.iterate, &target.theta_star);
    let total = m.quad_form(&e) - m.quad_form(&e_next);
    Ok(GainBreakdown { total, absolute_term, noise_bias_term, alignment_term })
}

/// Prediction gain of one SGD step on task `task`.
///
/// Expectation form (`Σ_t = Σ_T = I`):
/// `absolute = η‖e‖²(2 − η(d+2))`, `noise_bias = −η²(dσ_t² + (d+2)‖θ^Δ‖²)`,
/// `alignment = −2η(1 − η(d+2)) eᵀθ^Δ`.
pub fn prediction_gain(state: &SgdState, task: usize, problem: &Problem, mode: GainMode<'_>) -> Result<GainBreakdown> {
    match mode {
        GainMode::Sampled(rng) => {
            let batch = problem.sample(task, 1, rng)?;
            let x = batch.xs.row(0);
            let eps = batch.ys[0] - dot(x, &problem.task(task)?.theta_star);
            gain_for_sample(state, task, problem, x, eps)
        }
        GainMode::Expectation => {
            let spec = problem.task(task)?;
            let target = problem.target();
            if !spec.cov.is_identity() || !target.cov.is_identity() {
                return Err(Error::UnsupportedCovariance);
            }
            let d = state.dim() as f64;
            let eta = state.next_eta();
            let e = sub_vec(&state.iterate, &target.theta_star);
            let shift = sub_vec(&spec.theta_star, &target.theta_star);
            let absolute_term = eta * dot(&e, &e) * (2.0 - eta * (d + 2.0));
            let noise_bias_term = -eta * eta * (d * spec.sigma2 + (d + 2.0) * dot(&shift, &shift));
            let alignment_term = -2.0 * eta * (1.0 - eta * (d + 2.0)) * dot(&e, &shift);
            Ok(GainBreakdown {
                total: absolute_term + noise_bias_term + alignment_term,
                absolute_term,
                noise_bias_term,
                alignment_term,
            })
        }
    }
}

/// Realised one-step gain estimated on a held-out target batch:
/// `L̂(θ) − L̂(θ')` for the virtual update on `(x, y)`.
pub fn validation_gain(state: &SgdState, x: &[f64], y: f64, validation: &SampleBatch) -> Result<f64> {
    let next = sgd_step(state, x, y);
    Ok(crate::estimators::empirical_loss(&state.iterate, validation)?
        - crate::estimators::empirical_loss(&next.iterate, validation)?)
}

/// One row per SGD step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub task: usize,
    pub eta: f64,
    pub gain_total: f64,
    pub absolute_term: f64,
    pub noise_bias_term: f64,
    pub alignment_term: f64,
    /// Excess risk of the iterate after the step.
    pub excess_risk: f64,
}

#[derive(Debug, Clone)]
pub struct CurriculumRun {
    pub final_iterate: Vec<f64>,
    pub averaged_iterate: Vec<f64>,
    pub trace: Vec<TraceRow>,
    pub schedule: Schedule,
}

/// Runs `n` scheduler-driven SGD steps from `θ_0 = 0`.
///
/// Task `t` owns the sample sequence of `rng.derive(t)`, and the scheduler
/// sees the next unsampled observation of every task before choosing, so two
/// schedulers given the same `rng` face the same per-task data. The trace
/// records the gain realised on each consumed observation.
pub fn run_sgd_curriculum(
    problem: &Problem,
    scheduler: &mut dyn Scheduler,
    n: usize,
    step_rule: StepRule,
    rng: &RngStream,
) -> Result<CurriculumRun> {
    if n == 0 {
        return Err(Error::InvalidConfig("SGD curriculum needs N >= 1".into()));
    }
    let d = problem.dim();
    let mut streams: Vec<RngStream> = (0..problem.num_tasks()).map(|t| rng.derive(t as u64)).collect();
    let draw = |t: usize, s: &mut RngStream| -> Result<(Vec<f64>, f64)> {
        let b = problem.sample(t, 1, s)?;
        Ok((b.xs.row(0).to_vec(), b.ys[0]))
    };
    let mut state = SchedulerState::new(problem.num_tasks(), d);
    state.sgd = Some(SgdState::new(vec![0.0; d], step_rule));
    state.pending = Some(
        streams.iter_mut().enumerate().map(|(t, s)| draw(t, s)).collect::<Result<Vec<_>>>()?,
    );
    let mut trace = Vec::with_capacity(n);
    for step in 1..=n {
        let task = scheduler.next_task(&state)?;
        problem.task(task)?;
        let pending = state.pending.as_mut().expect("pending observations");
        let (x, y) = std::mem::replace(&mut pending[task], draw(task, &mut streams[task])?);
        let sgd = state.sgd.as_mut().expect("SGD state present");
        let eps = y - dot(&x, &problem.task(task)?.theta_star);
        let gain = gain_for_sample(sgd, task, problem, &x, eps)?;
        let eta = sgd.next_eta();
        sgd.step(&x, y);
        let excess_risk = crate::metrics::excess_risk(&sgd.iterate, problem)?;
        trace.push(TraceRow {
            step,
            task,
            eta,
            gain_total: gain.total,
            absolute_term: gain.absolute_term,
            noise_bias_term: gain.noise_bias_term,
            alignment_term: gain.alignment_term,
            excess_risk,
        });
        state.record(task, &x, y);
    }
    let sgd = state.sgd.take().expect("SGD state present");
    Ok(CurriculumRun {
        averaged_iterate: sgd.average()?,
        final_iterate: sgd.iterate,
        trace,
        schedule: state.schedule(),
    })
}
