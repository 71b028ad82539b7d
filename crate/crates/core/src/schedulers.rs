//! Task schedulers: policies mapping the observations so far to the next
//! task to sample.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{
    build_confidence_sets, ols, project_ball, select_source, two_phase_fit_with, AlsConfig, ConfidenceSet,
    TwoPhaseFit, WidthParams,
};
use crate::numerics::{dot, norm, sym_eigen, Matrix, RankOneSpectrum, RngStream};
use crate::problems::{AnyProblem, Problem, SampleBatch, StructuredProblem};
use crate::sgd::{gain_for_sample, prediction_gain, validation_gain, GainMode, SgdState};

/// Relative tolerance under which two scores count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Index of the largest score; near-ties go to the lowest index.
pub fn argmax_lowest(scores: &[f64]) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = TIE_TOL * best.abs().max(f64::MIN_POSITIVE);
    scores.iter().position(|&s| s >= best - tol).unwrap_or(0)
}

fn argmin_lowest(scores: &[f64]) -> usize {
    let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
    argmax_lowest(&neg)
}

/// Ordered task choices and their per-task totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub choices: Vec<usize>,
    pub counts: Vec<usize>,
}

impl Schedule {
    pub fn from_choices(choices: Vec<usize>, num_tasks: usize) -> Result<Self> {
        let mut counts = vec![0; num_tasks];
        for &c in &choices {
            if c >= num_tasks {
                return Err(Error::UnknownTask { index: c, count: num_tasks });
            }
            counts[c] += 1;
        }
        Ok(Self { choices, counts })
    }

    /// Task-major ordering of an allocation.
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let choices = counts.iter().enumerate().flat_map(|(t, &c)| std::iter::repeat_n(t, c)).collect();
        Self { choices, counts }
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn num_tasks(&self) -> usize {
        self.counts.len()
    }

    /// Share of the budget spent on each task.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.len().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Counts are consistent with choices and sum to the length.
    pub fn is_consistent(&self) -> bool {
        Schedule::from_choices(self.choices.clone(), self.num_tasks()).is_ok_and(|s| s.counts == self.counts)
    }
}

/// What a scheduler may look at: collected data, past choices, the
/// learner's SGD iterate when one is being trained, and (in SGD runs) the
/// next unsampled observation of every task.
#[derive(Debug, Clone)]
pub struct SchedulerState {
    pub buffers: Vec<SampleBatch>,
    pub choices: Vec<usize>,
    pub sgd: Option<SgdState>,
    pub pending: Option<Vec<(Vec<f64>, f64)>>,
}

impl SchedulerState {
    pub fn new(num_tasks: usize, d: usize) -> Self {
        Self {
            buffers: (0..num_tasks).map(|t| SampleBatch::empty(t, d)).collect(),
            choices: Vec::new(),
            sgd: None,
            pending: None,
        }
    }

    pub fn num_tasks(&self) -> usize {
        self.buffers.len()
    }

    pub fn steps(&self) -> usize {
        self.choices.len()
    }

    /// Per-task sample tallies.
    pub fn tallies(&self) -> Vec<usize> {
        self.buffers.iter().map(SampleBatch::len).collect()
    }

    pub fn record(&mut self, task: usize, x: &[f64], y: f64) {
        self.buffers[task].push(x, y);
        self.choices.push(task);
    }

    pub fn schedule(&self) -> Schedule {
        Schedule { choices: self.choices.clone(), counts: self.tallies() }
    }
}

pub trait Scheduler: Send {
    fn name(&self) -> String;
    fn next_task(&mut self, state: &SchedulerState) -> Result<usize>;
}

/// Collects `n` samples under `scheduler`; task `t` draws from `rng.derive(t)`.
pub fn collect(problem: &Problem, scheduler: &mut dyn Scheduler, n: usize, rng: &RngStream) -> Result<SchedulerState> {
    let mut streams: Vec<RngStream> = (0..problem.num_tasks()).map(|t| rng.derive(t as u64)).collect();
    let mut state = SchedulerState::new(problem.num_tasks(), problem.dim());
    for _ in 0..n {
        let t = scheduler.next_task(&state)?;
        if t >= problem.num_tasks() {
            return Err(Error::UnknownTask { index: t, count: problem.num_tasks() });
        }
        let s = problem.sample(t, 1, &mut streams[t])?;
        state.record(t, s.xs.row(0), s.ys[0]);
    }
    Ok(state)
}

/// Round robin: task `i mod T` at step `i`.
#[derive(Debug, Clone)]
pub struct UniformScheduler {
    num_tasks: usize,
}

impl UniformScheduler {
    pub fn new(num_tasks: usize) -> Self {
        assert!(num_tasks >= 1);
        Self { num_tasks }
    }
}

impl Scheduler for UniformScheduler {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn next_task(&mut self, state: &SchedulerState) -> Result<usize> {
        Ok(state.steps() % self.num_tasks)
    }
}

/// Replays a precomputed schedule.
#[derive(Debug, Clone)]
pub struct FixedScheduler {
    label: String,
    plan: Schedule,
}

impl FixedScheduler {
    pub fn new(label: impl Into<String>, plan: Schedule) -> Self {
        Self { label: label.into(), plan }
    }

    pub fn plan(&self) -> &Schedule {
        &self.plan
    }
}

impl Scheduler for FixedScheduler {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn next_task(&mut self, state: &SchedulerState) -> Result<usize> {
        self.plan
            .choices
            .get(state.steps())
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("fixed plan exhausted after {} steps", self.plan.len())))
    }
}

/// Scores `Q_t² + dσ_t²/N` of the single-task allocations.
pub fn oracle_fixed_scores(q: &[f64], sigma2: &[f64], d: usize, n: usize) -> Vec<f64> {
    q.iter().zip(sigma2).map(|(q, s)| q * q + d as f64 * s / n as f64).collect()
}

/// All `N` samples on `argmin_t Q_t² + dσ_t²/N`.
pub fn oracle_fixed_plan(q: &[f64], sigma2: &[f64], d: usize, n: usize) -> Result<(usize, Schedule)> {
    if q.is_empty() || q.len() != sigma2.len() {
        return Err(Error::InvalidConfig(format!("{} distances for {} noise levels", q.len(), sigma2.len())));
    }
    if n == 0 {
        return Err(Error::InvalidConfig("budget must be positive".into()));
    }
    let t = argmin_lowest(&oracle_fixed_scores(q, sigma2, d, n));
    let mut counts = vec![0; q.len()];
    counts[t] = n;
    Ok((t, Schedule::from_counts(counts)))
}

/// Oracle-fixed plan using the problem's true distances and noise levels.
pub fn oracle_fixed_for(problem: &Problem, n: usize) -> Result<(usize, Schedule)> {
    oracle_fixed_plan(&problem.distances_to_target(), &problem.sigma2s(), problem.dim(), n)
}

/// `N/(2T−2)` samples per source, the rest to the target.
pub fn source_selection_plan(n: usize, num_tasks: usize) -> Result<Schedule> {
    if num_tasks < 2 {
        return Err(Error::InvalidConfig("source selection needs T >= 2".into()));
    }
    if n < 2 * (num_tasks - 1) {
        return Err(Error::InvalidConfig(format!("budget {n} below 2(T-1) = {}", 2 * (num_tasks - 1))));
    }
    let per_source = n / (2 * num_tasks - 2);
    let mut counts = vec![per_source; num_tasks];
    counts[num_tasks - 1] = n - per_source * (num_tasks - 1);
    Ok(Schedule::from_counts(counts))
}

/// Projected per-source OLS estimates, then the one with the smallest
/// empirical loss on the target buffer. Returns `(source index, estimate)`.
pub fn source_selection_estimate(buffers: &[SampleBatch], c2: Option<f64>) -> Result<(usize, Vec<f64>)> {
    let Some((target, sources)) = buffers.split_last() else {
        return Err(Error::InsufficientData("no buffers".into()));
    };
    let candidates = sources
        .iter()
        .map(|b| {
            let est = ols(b)?;
            Ok(match c2 {
                Some(c) => project_ball(&est, c),
                None => est,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let t = select_source(&candidates, target)?;
    Ok((t, candidates[t].clone()))
}

/// Number of warm-up samples per task, `⌈γ(d + ln(N/δ))⌉`.
pub fn warmup_size(gamma: f64, d: usize, n_total: usize, delta: f64) -> usize {
    (gamma * (d as f64 + (n_total as f64 / delta).ln())).ceil().max(2.0) as usize
}

/// Settings of the optimistic scheduler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OfuParams {
    pub k: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Refit cadence; `None` refits every step for `N ≤ 2000`, else every `⌈N/500⌉`.
    pub refit_every: Option<usize>,
    /// Use the second-split residual variance instead of the known σ².
    pub estimate_sigma2: bool,
    pub als: AlsConfig,
}

impl OfuParams {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            alpha: 1.0,
            gamma: 1.0,
            delta: 0.1,
            refit_every: None,
            estimate_sigma2: false,
            als: AlsConfig::default(),
        }
    }

    pub fn cadence(&self, n_total: usize) -> usize {
        self.refit_every.unwrap_or(if n_total <= 2000 { 1 } else { n_total.div_ceil(500) }).max(1)
    }
}

/// Steps of projected gradient ascent after the candidate search.
const REFINE_STEPS: usize = 25;

/// Approximately maximizes `λ_k(G + θθᵀ)` over the confidence ball.
///
/// Candidates are the centre, the centre moved by `±r` along its own
/// direction, along the `k` bottom eigenvectors of `G` and along the k-th
/// eigenvector; the best is refined by projected supergradient ascent with
/// step halving. Returns the maximizer and its value.
pub fn inner_optimism(spectrum: &RankOneSpectrum, set: &ConfidenceSet, k: usize) -> (Vec<f64>, f64) {
    let center = &set.center;
    let value = |theta: &[f64]| spectrum.kth_largest(theta, k);
    let r = set.radius();
    if r == 0.0 {
        return (center.clone(), value(center));
    }
    let d = center.len();
    let shifted = |dir: &[f64], s: f64| -> Vec<f64> { center.iter().zip(dir).map(|(c, u)| c + s * r * u).collect() };

    let mut candidates = vec![center.clone()];
    let cn = norm(center);
    if cn > 0.0 {
        let chat: Vec<f64> = center.iter().map(|c| c / cn).collect();
        candidates.push(shifted(&chat, 1.0));
        candidates.push(shifted(&chat, -1.0));
    }
    let mut dirs: Vec<usize> = (d.saturating_sub(k)..d).collect();
    if !dirs.contains(&(k - 1)) {
        dirs.push(k - 1);
    }
    for j in dirs {
        let u = spectrum.base().vector(j);
        candidates.push(shifted(&u, 1.0));
        candidates.push(shifted(&u, -1.0));
    }
    let values: Vec<f64> = candidates.iter().map(|c| value(c)).collect();
    let best = argmax_lowest(&values);
    let mut theta = candidates.swap_remove(best);
    let mut v = values[best];

    let mut step = r;
    for _ in 0..REFINE_STEPS {
        let (_, g) = spectrum.kth_with_gradient(&theta, k);
        let gn = norm(&g);
        if gn == 0.0 || step <= 1e-12 * r {
            break;
        }
        let mut improved = false;
        while step > 1e-12 * r {
            let trial: Vec<f64> = theta.iter().zip(&g).map(|(t, gi)| t + step * gi / gn).collect();
            let trial = set.project(&trial);
            let tv = value(&trial);
            if tv > v {
                theta = trial;
                v = tv;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (theta, v)
}

/// Relative tolerance for ties between optimistic values; the inner search
/// only approaches the interlacing ceiling `λ_{k−1}(G)` to about this accuracy.
pub const OPTIMISM_TIE_TOL: f64 = 1e-9;

/// Argmax of `values` (level `level`); ties are broken by the optimistic
/// values `score(t, j)` at levels `j = level − 1, …, 1`, then by lowest index.
///
/// A rank-one update can lift `λ_k` at most to `λ_{k−1}(G)`, so once that
/// ceiling is reachable from several balls they tie exactly at level `k`.
pub fn break_ties(values: &[f64], mut score: impl FnMut(usize, usize) -> f64, level: usize) -> usize {
    let near = |vals: &[(usize, f64)]| -> Vec<usize> {
        let best = vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
        let tol = OPTIMISM_TIE_TOL * best.abs().max(f64::MIN_POSITIVE);
        vals.iter().filter(|v| v.1 >= best - tol).map(|v| v.0).collect()
    };
    let mut tied = near(&values.iter().copied().enumerate().collect::<Vec<_>>());
    let mut j = level;
    while tied.len() > 1 && j > 1 {
        j -= 1;
        let scored: Vec<(usize, f64)> = tied.iter().map(|&t| (t, score(t, j))).collect();
        tied = near(&scored);
    }
    tied[0]
}

/// Level actually maximized when `λ_level(G)` sits inside a cluster of
/// eigenvalues closer together than one step can add.
///
/// A rank-one update lifts `λ_j` by at most `λ_{j−1} − λ_j`, so inside such a
/// cluster every ball reaches the same ceiling and the objective is flat. The
/// top of the cluster is the first level a single belief can still separate.
pub fn cluster_level(values: &[f64], level: usize, sets: &[ConfidenceSet]) -> usize {
    let reach = sets.iter().map(|s| (norm(&s.center) + s.radius()).powi(2)).fold(0.0, f64::max);
    let base = values[level - 1];
    let mut top = level;
    while top > 1 && values[top - 2] - base < reach {
        top -= 1;
    }
    top
}

/// Optimistic diversity scheduler.
///
/// After a round-robin warm-up of [`warmup_size`] samples per task, each step
/// refits the two-phase estimator (at the configured cadence), builds the
/// confidence balls and picks the task whose ball contains the belief `θ̃`
/// maximizing `λ_k(G + θ̃θ̃ᵀ)`, where `G` is the Gram of past beliefs (ties
/// via [`break_ties`]). While `G` has rank below `k − 1` that objective is
/// identically zero, so the level `min(k, rank G + 1)` is maximized instead,
/// lifted to the top of its eigenvalue cluster by [`cluster_level`].
pub struct OfuScheduler {
    params: OfuParams,
    n_total: usize,
    num_tasks: usize,
    warmup: usize,
    width: WidthParams,
    gram: Matrix,
    beliefs: Vec<Vec<f64>>,
    lambda_history: Vec<f64>,
    fit: Option<TwoPhaseFit>,
    fitted_at: usize,
    last_sets: Vec<ConfidenceSet>,
    rng: RngStream,
}

impl OfuScheduler {
    pub fn new(problem: &StructuredProblem, n_total: usize, params: OfuParams, rng: RngStream) -> Result<Self> {
        if params.k == 0 || params.k > problem.dim() {
            return Err(Error::InvalidConfig(format!("need 1 <= k <= d, got {}", params.k)));
        }
        if !(params.alpha > 0.0 && params.gamma > 0.0 && params.delta > 0.0 && params.delta < 1.0) {
            return Err(Error::InvalidConfig("need alpha > 0, gamma > 0 and 0 < delta < 1".into()));
        }
        let b = problem.bounds();
        let d = problem.dim();
        let warmup = warmup_size(params.gamma, d, n_total, params.delta);
        let width = WidthParams {
            alpha: params.alpha,
            c0: b.c0,
            c1: b.c1,
            c5: b.c5,
            sigma2: problem.sigma2(),
            d,
            k: params.k,
            n_total,
            t_count: problem.num_tasks(),
            delta: params.delta,
        };
        Ok(Self {
            params,
            n_total,
            num_tasks: problem.num_tasks(),
            warmup,
            width,
            gram: Matrix::zeros(d, d),
            beliefs: Vec::new(),
            lambda_history: Vec::new(),
            fit: None,
            fitted_at: 0,
            last_sets: Vec::new(),
            rng,
        })
    }

    pub fn warmup(&self) -> usize {
        self.warmup
    }

    pub fn belief_gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn beliefs(&self) -> &[Vec<f64>] {
        &self.beliefs
    }

    /// `λ_k` of the belief Gram after each optimistic step.
    pub fn lambda_history(&self) -> &[f64] {
        &self.lambda_history
    }

    pub fn last_sets(&self) -> &[ConfidenceSet] {
        &self.last_sets
    }

    pub fn last_fit(&self) -> Option<&TwoPhaseFit> {
        self.fit.as_ref()
    }

    /// Optimistic selection; requires a completed warm-up.
    pub fn select(&mut self, state: &SchedulerState) -> Result<usize> {
        let tallies = state.tallies();
        if let Some((t, &have)) = tallies.iter().enumerate().find(|(_, &n)| n < self.warmup) {
            return Err(Error::NotWarmedUp { task: t, have, need: self.warmup });
        }
        let k = self.params.k;
        let steps = state.steps();
        if self.fit.is_none() || steps - self.fitted_at >= self.params.cadence(self.n_total) {
            let warm = self.fit.as_ref().map(|f| f.b_hat.clone());
            let mut als = self.params.als;
            if warm.is_some() {
                als.random_restarts = 0;
            }
            let fit = two_phase_fit_with(&state.buffers, k, &als, warm.as_ref(), &mut self.rng)?;
            self.fit = Some(fit);
            self.fitted_at = steps;
        }
        let fit = self.fit.as_ref().expect("fit present");
        let mut width = self.width;
        if self.params.estimate_sigma2 {
            width.sigma2 = fit.residual_variance.unwrap_or(width.sigma2);
        }
        let sets = build_confidence_sets(fit, &tallies, &width)?;

        let eig = sym_eigen(&self.gram)?;
        let scale = eig.max().abs().max(f64::MIN_POSITIVE);
        let rank = eig.values.iter().filter(|&&v| v > 1e-9 * scale).count();
        let level = k.min(rank + 1);
        let level = cluster_level(&eig.values, level, &sets);
        let spectrum = RankOneSpectrum::new(eig);
        let mut values = Vec::with_capacity(self.num_tasks);
        let mut thetas = Vec::with_capacity(self.num_tasks);
        for set in &sets {
            let (theta, v) = inner_optimism(&spectrum, set, level);
            values.push(v);
            thetas.push(theta);
        }
        let chosen = break_ties(&values, |t, j| inner_optimism(&spectrum, &sets[t], j).1, level);
        let best_theta = thetas.swap_remove(chosen);

        self.gram.add_outer(1.0, &best_theta, &best_theta);
        let lam = sym_eigen(&self.gram)?.kth_largest(k);
        if let Some(&prev) = self.lambda_history.last() {
            let tol = 1e-9 * self.gram.max_abs().max(1.0);
            if lam < prev - tol {
                return Err(Error::Numerical(format!("belief λ_k decreased from {prev} to {lam}")));
            }
        }
        self.lambda_history.push(lam);
        self.beliefs.push(best_theta);
        self.last_sets = sets;
        Ok(chosen)
    }
}

impl Scheduler for OfuScheduler {
    fn name(&self) -> String {
        "ofu".into()
    }

    fn next_task(&mut self, state: &SchedulerState) -> Result<usize> {
        let tallies = state.tallies();
        let min = tallies.iter().copied().min().unwrap_or(0);
        if min < self.warmup {
            return Ok(tallies.iter().position(|&n| n == min).unwrap_or(0));
        }
        self.select(state)
    }
}

/// How the prediction-gain scheduler evaluates a candidate task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GainSchedulerMode {
    /// Expected one-step gain in closed form from the true parameters
    /// (identity covariances).
    Accurate,
    /// One virtual step per task on an independent draw, scored on the true
    /// parameters.
    AccurateSampled,
    /// One virtual step per task on the observation the learner would
    /// consume next, scored on the true parameters.
    AccurateLookahead,
    /// One virtual step per task, scored on a held-out target batch.
    Estimated { validation_size: usize },
}

/// Picks the task with the largest one-step prediction gain for the
/// learner's current SGD iterate.
pub struct PredictionGainScheduler {
    problem: Problem,
    mode: GainSchedulerMode,
    rng: RngStream,
    validation: Option<SampleBatch>,
}

const VALIDATION_STREAM: u64 = 0x7661_6c69;

impl PredictionGainScheduler {
    /// Virtual draws come from `rng`, never from the learner's streams.
    pub fn new(problem: Problem, mode: GainSchedulerMode, rng: RngStream) -> Result<Self> {
        let validation = match mode {
            GainSchedulerMode::Estimated { validation_size } => {
                if validation_size == 0 {
                    return Err(Error::InvalidConfig("validation batch must be nonempty".into()));
                }
                let mut vrng = rng.derive(VALIDATION_STREAM);
                Some(problem.sample(problem.target_index(), validation_size, &mut vrng)?)
            }
            GainSchedulerMode::Accurate => {
                if !problem.all_identity_covariance() {
                    return Err(Error::UnsupportedCovariance);
                }
                None
            }
            GainSchedulerMode::AccurateSampled | GainSchedulerMode::AccurateLookahead => None,
        };
        Ok(Self { problem, mode, rng, validation })
    }

    /// Gain score of every task for the iterate in `sgd`; `pending` holds
    /// each task's next unsampled observation when known.
    pub fn scores(&mut self, sgd: &SgdState, pending: Option<&[(Vec<f64>, f64)]>) -> Result<Vec<f64>> {
        if self.mode == GainSchedulerMode::AccurateLookahead && pending.is_none() {
            return Err(Error::InvalidInput("accurate gain needs the pending observations".into()));
        }
        (0..self.problem.num_tasks())
            .map(|t| match self.mode {
                GainSchedulerMode::AccurateLookahead => {
                    let (x, y) = &pending.expect("checked above")[t];
                    let eps = y - dot(x, &self.problem.task(t)?.theta_star);
                    Ok(gain_for_sample(sgd, t, &self.problem, x, eps)?.total)
                }
                GainSchedulerMode::AccurateSampled => {
                    Ok(prediction_gain(sgd, t, &self.problem, GainMode::Sampled(&mut self.rng))?.total)
                }
                GainSchedulerMode::Accurate => {
                    Ok(prediction_gain(sgd, t, &self.problem, GainMode::Expectation)?.total)
                }
                GainSchedulerMode::Estimated { .. } => {
                    let s = self.problem.sample(t, 1, &mut self.rng)?;
                    validation_gain(sgd, s.xs.row(0), s.ys[0], self.validation.as_ref().expect("validation batch"))
                }
            })
            .collect()
    }
}

impl Scheduler for PredictionGainScheduler {
    fn name(&self) -> String {
        SchedulerSpec::PredictionGain(self.mode).name()
    }

    fn next_task(&mut self, state: &SchedulerState) -> Result<usize> {
        let sgd = state
            .sgd
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("prediction-gain scheduler needs an SGD iterate".into()))?;
        Ok(argmax_lowest(&self.scores(sgd, state.pending.as_deref())?))
    }
}

/// Buildable description of a scheduler, one instance per replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchedulerSpec {
    Uniform,
    OracleFixed,
    /// All samples on one task.
    Single(usize),
    SourceSelection,
    Ofu(OfuParams),
    PredictionGain(GainSchedulerMode),
}

impl SchedulerSpec {
    pub fn name(&self) -> String {
        match self {
            SchedulerSpec::Uniform => "uniform".into(),
            SchedulerSpec::OracleFixed => "oracle_fixed".into(),
            SchedulerSpec::Single(t) => format!("single:{t}"),
            SchedulerSpec::SourceSelection => "source_selection".into(),
            SchedulerSpec::Ofu(_) => "ofu".into(),
            SchedulerSpec::PredictionGain(GainSchedulerMode::Accurate) => "gain_accurate".into(),
            SchedulerSpec::PredictionGain(GainSchedulerMode::AccurateSampled) => "gain_accurate_sampled".into(),
            SchedulerSpec::PredictionGain(GainSchedulerMode::AccurateLookahead) => "gain_accurate_lookahead".into(),
            SchedulerSpec::PredictionGain(GainSchedulerMode::Estimated { .. }) => "gain_estimated".into(),
        }
    }

    /// Whether the scheduler needs a live SGD iterate.
    pub fn needs_sgd(&self) -> bool {
        matches!(self, SchedulerSpec::PredictionGain(_))
    }

    pub fn build(&self, problem: &AnyProblem, n: usize, rng: RngStream) -> Result<Box<dyn Scheduler>> {
        let p = problem.as_problem();
        Ok(match self {
            SchedulerSpec::Uniform => Box::new(UniformScheduler::new(p.num_tasks())),
            SchedulerSpec::OracleFixed => Box::new(FixedScheduler::new(self.name(), oracle_fixed_for(p, n)?.1)),
            SchedulerSpec::Single(t) => {
                p.task(*t)?;
                let mut counts = vec![0; p.num_tasks()];
                counts[*t] = n;
                Box::new(FixedScheduler::new(self.name(), Schedule::from_counts(counts)))
            }
            SchedulerSpec::SourceSelection => {
                Box::new(FixedScheduler::new(self.name(), source_selection_plan(n, p.num_tasks())?))
            }
            SchedulerSpec::Ofu(params) => {
                let s = problem
                    .structured()
                    .ok_or_else(|| Error::Unsupported("the optimistic scheduler needs a low-rank problem".into()))?;
                Box::new(OfuScheduler::new(s, n, *params, rng)?)
            }
            SchedulerSpec::PredictionGain(mode) => Box::new(PredictionGainScheduler::new(p.clone(), *mode, rng)?),
        })
    }
}
