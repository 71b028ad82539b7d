//! Parameter estimation: OLS, ball projection, source selection, the
//! two-phase low-rank estimator and its confidence sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    dist_sq, dot, least_squares, norm, random_orthonormal, solve_psd, thin_qr, top_left_singular_subspace, Matrix,
    RngStream,
};
use crate::problems::SampleBatch;

/// Ordinary least squares on one batch (minimum-norm when `n < d`).
pub fn ols(batch: &SampleBatch) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::InsufficientData(format!("no samples for task {}", batch.task_index)));
    }
    least_squares(&batch.xs, &batch.ys, 0.0)
}

/// OLS on the union of several batches.
pub fn pooled_ols<'a>(batches: impl IntoIterator<Item = &'a SampleBatch>) -> Result<Vec<f64>> {
    let mut all: Option<SampleBatch> = None;
    for b in batches {
        match all.as_mut() {
            None => all = Some(b.clone()),
            Some(a) => a.extend(b),
        }
    }
    match all {
        Some(b) if !b.is_empty() => ols(&b),
        _ => Err(Error::InsufficientData("no samples to pool".into())),
    }
}

/// Euclidean projection onto `{θ : ‖θ‖₂ ≤ c2}`.
pub fn project_ball(theta: &[f64], c2: f64) -> Vec<f64> {
    assert!(c2 > 0.0, "ball radius must be positive");
    let n = norm(theta);
    if n <= c2 {
        theta.to_vec()
    } else {
        theta.iter().map(|v| v * c2 / n).collect()
    }
}

/// Mean squared residual `(1/n) Σ (y_i − x_iᵀθ)²`.
pub fn empirical_loss(theta: &[f64], batch: &SampleBatch) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::InsufficientData("empirical loss of an empty batch".into()));
    }
    let total: f64 = (0..batch.len())
        .map(|i| {
            let r = batch.ys[i] - dot(batch.xs.row(i), theta);
            r * r
        })
        .sum();
    Ok(total / batch.len() as f64)
}

/// Index of the candidate with the smallest empirical loss on the target
/// batch; ties go to the lowest index.
pub fn select_source(candidates: &[Vec<f64>], target: &SampleBatch) -> Result<usize> {
    if candidates.is_empty() {
        return Err(Error::InvalidConfig("no candidate estimates".into()));
    }
    let mut best = (0, f64::INFINITY);
    for (i, c) in candidates.iter().enumerate() {
        let loss = empirical_loss(c, target)?;
        if loss < best.1 {
            best = (i, loss);
        }
    }
    Ok(best.0)
}

/// Alternating least squares settings for the representation fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlsConfig {
    pub max_iters: usize,
    /// Stop when the relative objective change falls below this.
    pub rel_tol: f64,
    /// Random starts tried in addition to the warm start.
    pub random_restarts: usize,
}

impl Default for AlsConfig {
    fn default() -> Self {
        Self { max_iters: 200, rel_tol: 1e-9, random_restarts: 2 }
    }
}

/// Output of the split-sample low-rank estimator.
#[derive(Debug, Clone)]
pub struct TwoPhaseFit {
    /// `d × k`, orthonormal columns.
    pub b_hat: Matrix,
    pub beta_hats: Vec<Vec<f64>>,
    /// Per task `(first split, second split)` sizes.
    pub split_sizes: Vec<(usize, usize)>,
    /// Final first-split objective of the winning start.
    pub objective: f64,
    /// Objective after every ALS iteration of the winning start.
    pub objective_trace: Vec<f64>,
    /// Residual variance of the second-split fits, `Σ‖y − XB̂β̂‖² / Σ(n₂ − k)`.
    pub residual_variance: Option<f64>,
}

impl TwoPhaseFit {
    pub fn num_tasks(&self) -> usize {
        self.beta_hats.len()
    }

    pub fn rank(&self) -> usize {
        self.b_hat.cols()
    }

    /// `B̂ β̂_t`.
    pub fn prediction(&self, t: usize) -> Vec<f64> {
        self.b_hat.matvec(&self.beta_hats[t])
    }

    pub fn predictions(&self) -> Vec<Vec<f64>> {
        (0..self.num_tasks()).map(|t| self.prediction(t)).collect()
    }
}

/// Per-task sufficient statistics of the first split.
struct SplitStats {
    xtx: Vec<Matrix>,
    xty: Vec<Vec<f64>>,
    yty: Vec<f64>,
}

impl SplitStats {
    fn objective(&self, b: &Matrix, betas: &[Vec<f64>]) -> f64 {
        let mut total = 0.0;
        for t in 0..betas.len() {
            let theta = b.matvec(&betas[t]);
            total += self.yty[t] - 2.0 * dot(&self.xty[t], &theta) + self.xtx[t].quad_form(&theta);
        }
        total
    }

    fn beta_step(&self, b: &Matrix) -> Result<Vec<Vec<f64>>> {
        (0..self.xtx.len())
            .map(|t| {
                let m = b.transpose().matmul(&self.xtx[t]).matmul(b);
                solve_psd(&m.symmetrized(), &b.tr_matvec(&self.xty[t]))
            })
            .collect()
    }

    /// Least squares over `vec(B)` given the β's; column-major vec index `c·d + r`.
    fn b_step(&self, betas: &[Vec<f64>], d: usize, k: usize) -> Result<Matrix> {
        let dk = d * k;
        let mut normal = Matrix::zeros(dk, dk);
        let mut rhs = vec![0.0; dk];
        for (t, beta) in betas.iter().enumerate() {
            let a = &self.xtx[t];
            for c1 in 0..k {
                let b1 = beta[c1];
                if b1 == 0.0 {
                    continue;
                }
                for r in 0..d {
                    rhs[c1 * d + r] += b1 * self.xty[t][r];
                }
                for c2 in 0..k {
                    let w = b1 * beta[c2];
                    if w == 0.0 {
                        continue;
                    }
                    for r1 in 0..d {
                        let row = a.row(r1);
                        let dst = normal.row_mut(c1 * d + r1);
                        for r2 in 0..d {
                            dst[c2 * d + r2] += w * row[r2];
                        }
                    }
                }
            }
        }
        let v = solve_psd(&normal, &rhs)?;
        let mut b = Matrix::zeros(d, k);
        for c in 0..k {
            for r in 0..d {
                b[(r, c)] = v[c * d + r];
            }
        }
        Ok(b)
    }
}

struct AlsRun {
    b: Matrix,
    trace: Vec<f64>,
}

/// Orthonormalizes `b`, absorbing the change of basis into the β's.
fn reorthonormalize(b: &Matrix, betas: &mut [Vec<f64>]) -> Option<Matrix> {
    let (q, r) = thin_qr(b).ok()?;
    for beta in betas.iter_mut() {
        *beta = r.matvec(beta);
    }
    Some(q)
}

fn run_als(stats: &SplitStats, start: Matrix, d: usize, k: usize, cfg: &AlsConfig, scale: f64) -> Result<AlsRun> {
    let mut b = match thin_qr(&start) {
        Ok((q, _)) => q,
        Err(_) => start,
    };
    let mut betas = stats.beta_step(&b)?;
    let mut obj = stats.objective(&b, &betas);
    let mut trace = vec![obj];
    let floor = 1e-26 * scale.max(f64::MIN_POSITIVE);
    for _ in 0..cfg.max_iters {
        if obj <= floor {
            break;
        }
        let candidate = stats.b_step(&betas, d, k)?;
        match reorthonormalize(&candidate, &mut betas) {
            Some(q) => b = q,
            // B-step collapsed a column; keep the previous basis
            None => break,
        }
        betas = stats.beta_step(&b)?;
        let next = stats.objective(&b, &betas);
        debug_assert!(
            next <= obj + 1e-9 * scale.max(1.0),
            "ALS objective increased: {obj} -> {next}"
        );
        trace.push(next);
        let change = (obj - next).abs() / obj.abs().max(f64::MIN_POSITIVE);
        obj = next;
        if change <= cfg.rel_tol {
            break;
        }
    }
    Ok(AlsRun { b, trace })
}

/// Two-phase estimator with default ALS settings.
pub fn two_phase_fit(batches: &[SampleBatch], k: usize, rng: &mut RngStream) -> Result<TwoPhaseFit> {
    two_phase_fit_with(batches, k, &AlsConfig::default(), None, rng)
}

/// Splits every batch into two halves of `⌊n/2⌋` (odd leftovers dropped),
/// fits a rank-`k` representation on the first halves by alternating least
/// squares, then regresses each task's second half on the columns of `B̂`.
///
/// The warm start is `warm` when given, else the top-`k` left singular
/// subspace of the stacked per-task OLS estimates; `random_restarts` extra
/// Haar-random starts are tried and the lowest objective wins (earliest start
/// on ties).
pub fn two_phase_fit_with(
    batches: &[SampleBatch],
    k: usize,
    cfg: &AlsConfig,
    warm: Option<&Matrix>,
    rng: &mut RngStream,
) -> Result<TwoPhaseFit> {
    let Some(first) = batches.first() else {
        return Err(Error::InsufficientData("no task batches".into()));
    };
    let d = first.dim();
    if k == 0 || k > d {
        return Err(Error::InvalidConfig(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    let mut split_sizes = Vec::with_capacity(batches.len());
    let mut firsts = Vec::with_capacity(batches.len());
    let mut seconds = Vec::with_capacity(batches.len());
    for b in batches {
        if b.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "task {} has {} samples, need at least 2",
                b.task_index,
                b.len()
            )));
        }
        let half = b.len() / 2;
        split_sizes.push((half, half));
        firsts.push(b.slice(0, half));
        seconds.push(b.slice(half, half));
    }

    let stats = SplitStats {
        xtx: firsts.iter().map(|b| b.xs.gram()).collect(),
        xty: firsts.iter().map(|b| b.xs.tr_matvec(&b.ys)).collect(),
        yty: firsts.iter().map(|b| dot(&b.ys, &b.ys)).collect(),
    };
    let scale: f64 = stats.yty.iter().sum();

    let warm_start = match warm {
        Some(w) if w.rows() == d && w.cols() == k => w.clone(),
        _ => {
            let ols_cols = firsts.iter().map(ols).collect::<Result<Vec<_>>>()?;
            top_left_singular_subspace(&Matrix::from_columns(&ols_cols)?, k)?
        }
    };
    let mut starts = vec![warm_start];
    for _ in 0..cfg.random_restarts {
        starts.push(random_orthonormal(d, k, rng)?);
    }

    let mut best: Option<AlsRun> = None;
    for start in starts {
        let run = run_als(&stats, start, d, k, cfg, scale)?;
        let better = best.as_ref().is_none_or(|b| run.trace.last() < b.trace.last());
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");

    let mut beta_hats = Vec::with_capacity(batches.len());
    let mut rss = 0.0;
    let mut dof = 0usize;
    for s in &seconds {
        let z = s.xs.matmul(&best.b);
        let beta = least_squares(&z, &s.ys, 0.0)?;
        let fitted = z.matvec(&beta);
        rss += dist_sq(&fitted, &s.ys);
        dof += s.len().saturating_sub(k);
        beta_hats.push(beta);
    }
    Ok(TwoPhaseFit {
        b_hat: best.b,
        beta_hats,
        split_sizes,
        objective: *best.trace.last().expect("non-empty trace"),
        objective_trace: best.trace,
        residual_variance: (dof > 0).then(|| rss / dof as f64),
    })
}

/// Inputs of the confidence width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthParams {
    pub alpha: f64,
    pub c0: f64,
    pub c1: f64,
    pub c5: f64,
    pub sigma2: f64,
    pub d: usize,
    pub k: usize,
    /// Total sample budget N.
    pub n_total: usize,
    /// Number of tasks T.
    pub t_count: usize,
    pub delta: f64,
}

impl WidthParams {
    pub fn kappa(&self) -> f64 {
        self.c0 / self.c1
    }

    /// `max(1, ln(κN/(Tδ)))`.
    pub fn log_term(&self) -> f64 {
        (self.kappa() * self.n_total as f64 / (self.t_count as f64 * self.delta)).ln().max(1.0)
    }
}

/// Squared radius `α C5 σ² d k log(κN/(Tδ)) / (C1² n)` of a task's
/// confidence ball after `n` observations; the log is floored at 1.
pub fn confidence_width(n: usize, p: &WidthParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::InsufficientData("confidence width with zero observations".into()));
    }
    Ok(p.alpha * p.c5 * p.sigma2 * (p.d * p.k) as f64 * p.log_term() / (p.c1 * p.c1 * n as f64))
}

/// Containment slack for `‖center − θ‖² ≤ width`.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Ball `{θ : ‖center − θ‖² ≤ width}` around a task's low-rank prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceSet {
    pub center: Vec<f64>,
    /// Squared radius.
    pub width: f64,
    pub task_index: usize,
    pub n_used: usize,
}

impl ConfidenceSet {
    pub fn new(center: Vec<f64>, width: f64, task_index: usize, n_used: usize) -> Result<Self> {
        if !(width >= 0.0) || !width.is_finite() {
            return Err(Error::InvalidInput(format!("confidence width must be finite and >= 0, got {width}")));
        }
        Ok(Self { center, width, task_index, n_used })
    }

    pub fn radius(&self) -> f64 {
        self.width.sqrt()
    }

    pub fn contains(&self, theta: &[f64]) -> bool {
        Self::covers(dist_sq(&self.center, theta), self.width)
    }

    /// Containment rule for a squared distance against a width.
    pub fn covers(dist_sq: f64, width: f64) -> bool {
        dist_sq <= width + CONTAINMENT_TOL
    }

    /// Closest point of the ball to `theta`.
    pub fn project(&self, theta: &[f64]) -> Vec<f64> {
        let r = self.radius();
        let diff: Vec<f64> = theta.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let n = norm(&diff);
        if n <= r {
            return theta.to_vec();
        }
        self.center.iter().zip(&diff).map(|(c, v)| c + v * r / n).collect()
    }
}

/// One confidence set per task, centred at `B̂β̂_t` with width from `counts[t]`.
pub fn build_confidence_sets(fit: &TwoPhaseFit, counts: &[usize], params: &WidthParams) -> Result<Vec<ConfidenceSet>> {
    if counts.len() != fit.num_tasks() {
        return Err(Error::InvalidInput(format!("{} counts for {} tasks", counts.len(), fit.num_tasks())));
    }
    if !(params.alpha > 0.0) {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {}", params.alpha)));
    }
    counts
        .iter()
        .enumerate()
        .map(|(t, &n)| ConfidenceSet::new(fit.prediction(t), confidence_width(n, params)?, t, n))
        .collect()
}
