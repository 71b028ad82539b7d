//! Task models and synthetic instance generators.
//!
//! A task is a linear model `y = xᵀθ* + ε` with `x ~ N(0, Σ)` and
//! `ε ~ N(0, σ²)`. The last task of every problem is the target.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{norm, random_orthonormal, sym_eigen, GaussianSampler, Matrix, RngStream};

/// Relative slack when checking declared bounds.
const BOUND_TOL: f64 = 1e-9;

/// One regression task: coefficient, noise variance and covariate covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    pub theta_star: Vec<f64>,
    pub sigma2: f64,
    pub cov: Matrix,
}

impl TaskSpec {
    pub fn new(theta_star: Vec<f64>, sigma2: f64, cov: Matrix) -> Result<Self> {
        let d = theta_star.len();
        if cov.rows() != d || cov.cols() != d {
            return Err(Error::InvalidConfig(format!(
                "covariance is {}x{} for a {d}-dimensional task",
                cov.rows(),
                cov.cols()
            )));
        }
        if !(sigma2 >= 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidConfig(format!("noise variance must be >= 0, got {sigma2}")));
        }
        if theta_star.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coefficient".into()));
        }
        if !cov.is_symmetric(1e-10) {
            return Err(Error::InvalidConfig("covariance not symmetric".into()));
        }
        Ok(Self { theta_star, sigma2, cov })
    }

    pub fn isotropic(theta_star: Vec<f64>, sigma2: f64) -> Result<Self> {
        let d = theta_star.len();
        Self::new(theta_star, sigma2, Matrix::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.theta_star.len()
    }
}

/// Constants of the covariate coverage and norm assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// Upper eigenvalue bound of every Σ_t.
    #[serde(rename = "C0")]
    pub c0: f64,
    /// Lower eigenvalue bound of every Σ_t.
    #[serde(rename = "C1")]
    pub c1: f64,
    /// Optional bound on `‖θ_t*‖₂`.
    #[serde(rename = "C2", default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
}

impl Bounds {
    pub fn identity() -> Self {
        Self { c0: 1.0, c1: 1.0, c2: None }
    }

    pub fn kappa(&self) -> f64 {
        self.c0 / self.c1
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Self::identity()
    }
}

/// Unstructured multitask problem; the target is the last task.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    tasks: Vec<TaskSpec>,
    bounds: Bounds,
    hidden_source: Option<usize>,
}

impl Problem {
    pub fn new(tasks: Vec<TaskSpec>, bounds: Bounds) -> Result<Self> {
        let Some(first) = tasks.first() else {
            return Err(Error::InvalidConfig("a problem needs at least one task".into()));
        };
        let d = first.dim();
        if d == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if tasks.iter().any(|t| t.dim() != d) {
            return Err(Error::InvalidConfig("tasks disagree on dimension".into()));
        }
        if !(bounds.c1 > 0.0 && bounds.c0 >= bounds.c1) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < C1 <= C0, got C1 = {}, C0 = {}",
                bounds.c1, bounds.c0
            )));
        }
        for (t, task) in tasks.iter().enumerate() {
            if !task.cov.is_identity() {
                let eig = sym_eigen(&task.cov)?;
                if eig.min() < bounds.c1 * (1.0 - BOUND_TOL) || eig.max() > bounds.c0 * (1.0 + BOUND_TOL) {
                    return Err(Error::InvalidConfig(format!(
                        "task {t}: covariance spectrum [{}, {}] outside [C1, C0] = [{}, {}]",
                        eig.min(),
                        eig.max(),
                        bounds.c1,
                        bounds.c0
                    )));
                }
            } else if bounds.c1 > 1.0 + BOUND_TOL || bounds.c0 < 1.0 - BOUND_TOL {
                return Err(Error::InvalidConfig(format!("task {t}: identity covariance outside [C1, C0]")));
            }
            if let Some(c2) = bounds.c2 {
                if norm(&task.theta_star) > c2 * (1.0 + BOUND_TOL) {
                    return Err(Error::InvalidConfig(format!("task {t}: ‖θ*‖ exceeds C2 = {c2}")));
                }
            }
        }
        Ok(Self { tasks, bounds, hidden_source: None })
    }

    /// Same tasks under new bounds, revalidated.
    pub fn with_bounds(&self, bounds: Bounds) -> Result<Self> {
        Ok(Self::new(self.tasks.clone(), bounds)?.with_hidden_source(self.hidden_source))
    }

    pub fn with_hidden_source(mut self, index: Option<usize>) -> Self {
        self.hidden_source = index;
        self
    }

    pub fn dim(&self) -> usize {
        self.tasks[0].dim()
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn target_index(&self) -> usize {
        self.tasks.len() - 1
    }

    pub fn tasks(&self) -> &[TaskSpec] {
        &self.tasks
    }

    pub fn task(&self, t: usize) -> Result<&TaskSpec> {
        self.tasks.get(t).ok_or(Error::UnknownTask { index: t, count: self.tasks.len() })
    }

    pub fn target(&self) -> &TaskSpec {
        &self.tasks[self.target_index()]
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// For identical-source instances: the source sharing the target's θ*.
    pub fn hidden_source(&self) -> Option<usize> {
        self.hidden_source
    }

    pub fn sigma2s(&self) -> Vec<f64> {
        self.tasks.iter().map(|t| t.sigma2).collect()
    }

    pub fn all_identity_covariance(&self) -> bool {
        self.tasks.iter().all(|t| t.cov.is_identity())
    }

    /// Draws `n` samples from task `t`.
    pub fn sample(&self, t: usize, n: usize, rng: &mut RngStream) -> Result<SampleBatch> {
        let task = self.task(t)?;
        let sampler = GaussianSampler::new(vec![0.0; task.dim()], &task.cov)?;
        let mut batch = SampleBatch::empty(t, task.dim());
        let sd = task.sigma2.sqrt();
        for _ in 0..n {
            let x = sampler.sample(rng);
            let eps = sd * rng.normal();
            let y = crate::numerics::dot(&x, &task.theta_star) + eps;
            batch.push(&x, y);
        }
        Ok(batch)
    }

    /// Δ_{t1,t2} = ‖θ_{t1}* − θ_{t2}*‖₂.
    pub fn transfer_distance(&self, t1: usize, t2: usize) -> Result<f64> {
        let a = &self.task(t1)?.theta_star;
        let b = &self.task(t2)?.theta_star;
        Ok(crate::numerics::dist_sq(a, b).sqrt())
    }

    /// Distances of every task to the target.
    pub fn distances_to_target(&self) -> Vec<f64> {
        let target = self.target_index();
        (0..self.num_tasks()).map(|t| self.transfer_distance(t, target).expect("valid index")).collect()
    }
}

/// Samples drawn from one task.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub task_index: usize,
    pub xs: Matrix,
    pub ys: Vec<f64>,
}

impl SampleBatch {
    pub fn empty(task_index: usize, d: usize) -> Self {
        Self { task_index, xs: Matrix::zeros(0, d), ys: Vec::new() }
    }

    pub fn new(task_index: usize, xs: Matrix, ys: Vec<f64>) -> Result<Self> {
        if xs.rows() != ys.len() {
            return Err(Error::InvalidInput(format!("{} rows but {} responses", xs.rows(), ys.len())));
        }
        Ok(Self { task_index, xs, ys })
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.xs.cols()
    }

    pub fn push(&mut self, x: &[f64], y: f64) {
        self.xs.push_row(x);
        self.ys.push(y);
    }

    pub fn extend(&mut self, other: &SampleBatch) {
        for i in 0..other.len() {
            self.push(other.xs.row(i), other.ys[i]);
        }
    }

    /// Rows `start..start + n`.
    pub fn slice(&self, start: usize, n: usize) -> SampleBatch {
        SampleBatch {
            task_index: self.task_index,
            xs: self.xs.row_range(start, n),
            ys: self.ys[start..start + n].to_vec(),
        }
    }
}

/// Constants for the low-rank model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuredBounds {
    #[serde(rename = "C0")]
    pub c0: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    /// Bound on the largest singular value of B*.
    #[serde(rename = "C4")]
    pub c4: f64,
    /// Bound on `‖β_t*‖²`.
    #[serde(rename = "C5")]
    pub c5: f64,
}

/// Low-rank multitask problem `y = xᵀ B* β_t* + ε` with shared σ² and Σ.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredProblem {
    b_star: Matrix,
    betas: Vec<Vec<f64>>,
    sigma2: f64,
    cov: Matrix,
    bounds: StructuredBounds,
    lambda: Option<f64>,
    view: Problem,
}

impl StructuredProblem {
    pub fn new(
        b_star: Matrix,
        betas: Vec<Vec<f64>>,
        sigma2: f64,
        cov: Matrix,
        bounds: StructuredBounds,
        lambda: Option<f64>,
    ) -> Result<Self> {
        let (d, k) = (b_star.rows(), b_star.cols());
        if k == 0 || k > d {
            return Err(Error::InvalidConfig(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
        }
        if betas.is_empty() {
            return Err(Error::InvalidConfig("a problem needs at least one task".into()));
        }
        if betas.iter().any(|b| b.len() != k) {
            return Err(Error::InvalidConfig("coefficient length differs from k".into()));
        }
        let smax = sym_eigen(&b_star.gram())?.max().max(0.0).sqrt();
        if smax > bounds.c4 * (1.0 + BOUND_TOL) {
            return Err(Error::InvalidConfig(format!(
                "largest singular value of B* ({smax}) exceeds C4 = {}",
                bounds.c4
            )));
        }
        for (t, b) in betas.iter().enumerate() {
            let n2 = crate::numerics::dot(b, b);
            if n2 > bounds.c5 * (1.0 + BOUND_TOL) {
                return Err(Error::InvalidConfig(format!("task {t}: ‖β‖² = {n2} exceeds C5 = {}", bounds.c5)));
            }
        }
        let tasks = betas
            .iter()
            .map(|b| TaskSpec::new(b_star.matvec(b), sigma2, cov.clone()))
            .collect::<Result<Vec<_>>>()?;
        let view = Problem::new(tasks, Bounds { c0: bounds.c0, c1: bounds.c1, c2: None })?;
        Ok(Self { b_star, betas, sigma2, cov, bounds, lambda, view })
    }

    /// Same model under new bounds, revalidated.
    pub fn with_bounds(&self, bounds: StructuredBounds) -> Result<Self> {
        Self::new(self.b_star.clone(), self.betas.clone(), self.sigma2, self.cov.clone(), bounds, self.lambda)
    }

    pub fn dim(&self) -> usize {
        self.b_star.rows()
    }

    pub fn rank(&self) -> usize {
        self.b_star.cols()
    }

    pub fn num_tasks(&self) -> usize {
        self.betas.len()
    }

    pub fn b_star(&self) -> &Matrix {
        &self.b_star
    }

    pub fn betas(&self) -> &[Vec<f64>] {
        &self.betas
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn cov(&self) -> &Matrix {
        &self.cov
    }

    pub fn bounds(&self) -> StructuredBounds {
        self.bounds
    }

    /// Instance diversity constant recorded by the generator, if any.
    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    /// `B* β_t*`.
    pub fn theta(&self, t: usize) -> &[f64] {
        &self.view.tasks[t].theta_star
    }

    /// The same tasks as an unstructured problem.
    pub fn as_problem(&self) -> &Problem {
        &self.view
    }

    pub fn sample(&self, t: usize, n: usize, rng: &mut RngStream) -> Result<SampleBatch> {
        self.view.sample(t, n, rng)
    }
}

/// Either problem flavour, as stored in problem files.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyProblem {
    Unstructured(Problem),
    Structured(StructuredProblem),
}

impl AnyProblem {
    pub fn as_problem(&self) -> &Problem {
        match self {
            AnyProblem::Unstructured(p) => p,
            AnyProblem::Structured(s) => s.as_problem(),
        }
    }

    pub fn structured(&self) -> Option<&StructuredProblem> {
        match self {
            AnyProblem::Structured(s) => Some(s),
            AnyProblem::Unstructured(_) => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ProblemDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProblemDoc = serde_json::from_str(text)?;
        doc.into_problem()
    }
}

impl From<Problem> for AnyProblem {
    fn from(p: Problem) -> Self {
        AnyProblem::Unstructured(p)
    }
}

impl From<StructuredProblem> for AnyProblem {
    fn from(p: StructuredProblem) -> Self {
        AnyProblem::Structured(p)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TaskDoc {
    theta: Vec<f64>,
    sigma2: f64,
    cov: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProblemDoc {
    kind: String,
    d: usize,
    #[serde(rename = "T")]
    t: usize,
    k: Option<usize>,
    target_index: usize,
    tasks: Vec<TaskDoc>,
    bounds: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hidden_source: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b_star: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    betas: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cov: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
}

fn to_map<T: Serialize>(v: &T) -> serde_json::Map<String, serde_json::Value> {
    match serde_json::to_value(v).expect("bounds serialize") {
        serde_json::Value::Object(m) => m,
        _ => unreachable!("bounds serialize to an object"),
    }
}

impl From<&AnyProblem> for ProblemDoc {
    fn from(p: &AnyProblem) -> Self {
        let view = p.as_problem();
        let tasks = view
            .tasks()
            .iter()
            .map(|t| TaskDoc { theta: t.theta_star.clone(), sigma2: t.sigma2, cov: t.cov.to_rows() })
            .collect();
        let mut doc = ProblemDoc {
            kind: "unstructured".into(),
            d: view.dim(),
            t: view.num_tasks(),
            k: None,
            target_index: view.target_index(),
            tasks,
            bounds: to_map(&view.bounds()),
            hidden_source: view.hidden_source(),
            b_star: None,
            betas: None,
            sigma2: None,
            cov: None,
            lambda: None,
        };
        if let AnyProblem::Structured(s) = p {
            doc.kind = "structured".into();
            doc.k = Some(s.rank());
            doc.bounds = to_map(&s.bounds());
            doc.b_star = Some(s.b_star().to_rows());
            doc.betas = Some(s.betas().to_vec());
            doc.sigma2 = Some(s.sigma2());
            doc.cov = Some(s.cov().to_rows());
            doc.lambda = s.lambda();
        }
        doc
    }
}

impl ProblemDoc {
    fn into_problem(self) -> Result<AnyProblem> {
        let bounds = serde_json::Value::Object(self.bounds);
        let problem = match self.kind.as_str() {
            "unstructured" => {
                let tasks = self
                    .tasks
                    .into_iter()
                    .map(|t| TaskSpec::new(t.theta, t.sigma2, Matrix::from_rows(&t.cov)?))
                    .collect::<Result<Vec<_>>>()?;
                let b: Bounds = serde_json::from_value(bounds)?;
                AnyProblem::Unstructured(Problem::new(tasks, b)?.with_hidden_source(self.hidden_source))
            }
            "structured" => {
                let missing = |f: &str| Error::InvalidConfig(format!("structured problem without `{f}`"));
                let b_star = Matrix::from_rows(&self.b_star.ok_or_else(|| missing("b_star"))?)?;
                let betas = self.betas.ok_or_else(|| missing("betas"))?;
                let sigma2 = self.sigma2.ok_or_else(|| missing("sigma2"))?;
                let cov = Matrix::from_rows(&self.cov.ok_or_else(|| missing("cov"))?)?;
                let b: StructuredBounds = serde_json::from_value(bounds)?;
                AnyProblem::Structured(StructuredProblem::new(b_star, betas, sigma2, cov, b, self.lambda)?)
            }
            other => return Err(Error::InvalidConfig(format!("unknown problem kind `{other}`"))),
        };
        let view = problem.as_problem();
        if view.dim() != self.d || view.num_tasks() != self.t || view.target_index() != self.target_index {
            return Err(Error::InvalidConfig("header fields disagree with the task list".into()));
        }
        Ok(problem)
    }
}

/// How generators choose task covariances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovarianceMode {
    Identity,
    /// Random SPD matrices with eigenvalues uniform in `[c1, c0]`.
    RandomSpd { c1: f64, c0: f64 },
}

fn random_spd(d: usize, c1: f64, c0: f64, rng: &mut RngStream) -> Result<Matrix> {
    let q = random_orthonormal(d, d, rng)?;
    let eigs: Vec<f64> = (0..d).map(|_| c1 + (c0 - c1) * rng.uniform()).collect();
    let m = q.matmul(&Matrix::from_diag(&eigs)).matmul(&q.transpose());
    Ok(m.symmetrized())
}

/// Random unstructured problem: θ_t* entries i.i.d. `N(0, coef_std²)`, noise
/// variances from `sigma2`, last task is the target.
pub fn gen_random_problem(
    d: usize,
    t: usize,
    sigma2: &[f64],
    coef_std: f64,
    covariance: CovarianceMode,
    rng: &mut RngStream,
) -> Result<Problem> {
    if sigma2.is_empty() {
        return Err(Error::InvalidConfig("empty noise-variance list".into()));
    }
    if sigma2.len() != t {
        return Err(Error::InvalidConfig(format!("{} noise variances for {t} tasks", sigma2.len())));
    }
    if d == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    if !(coef_std >= 0.0) {
        return Err(Error::InvalidConfig(format!("coefficient std must be >= 0, got {coef_std}")));
    }
    let bounds = match covariance {
        CovarianceMode::Identity => Bounds::identity(),
        CovarianceMode::RandomSpd { c1, c0 } => {
            if !(c1 > 0.0 && c0 >= c1) {
                return Err(Error::InvalidConfig(format!("need 0 < c1 <= c0, got {c1}, {c0}")));
            }
            Bounds { c0, c1, c2: None }
        }
    };
    let mut tasks = Vec::with_capacity(t);
    for &s2 in sigma2 {
        let theta: Vec<f64> = (0..d).map(|_| coef_std * rng.normal()).collect();
        let cov = match covariance {
            CovarianceMode::Identity => Matrix::identity(d),
            CovarianceMode::RandomSpd { c1, c0 } => random_spd(d, c1, c0, rng)?,
        };
        tasks.push(TaskSpec::new(theta, s2, cov)?);
    }
    Problem::new(tasks, bounds)
}

/// Integer lattice points `0, ±e_1, …, ±e_d, ±2e_1, …`; distinct points are
/// at distance at least 1.
fn lattice_points(d: usize, count: usize) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0; d]];
    let mut m = 1.0;
    while pts.len() < count {
        for i in 0..d {
            for sign in [1.0, -1.0] {
                let mut p = vec![0.0; d];
                p[i] = sign * m;
                pts.push(p);
            }
        }
        m += 1.0;
    }
    pts.truncate(count);
    pts
}

/// Problem where sources are pairwise `2δ`-separated and exactly one of them
/// (chosen uniformly, recorded as `hidden_source`) equals the target.
pub fn gen_identical_source_problem(
    d: usize,
    t: usize,
    delta: f64,
    sigma2: &[f64],
    rng: &mut RngStream,
) -> Result<Problem> {
    if t < 3 {
        return Err(Error::InvalidConfig(format!("identical-source instances need T >= 3, got {t}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidConfig(format!("delta must be positive, got {delta}")));
    }
    if sigma2.len() != t {
        return Err(Error::InvalidConfig(format!("{} noise variances for {t} tasks", sigma2.len())));
    }
    if d == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    let n_sources = t - 1;
    let rotation = random_orthonormal(d, d, rng)?;
    let offset: Vec<f64> = (0..d).map(|_| delta * rng.normal()).collect();
    let mut thetas: Vec<Vec<f64>> = lattice_points(d, n_sources)
        .into_iter()
        .map(|p| {
            let scaled: Vec<f64> = p.iter().map(|v| 2.0 * delta * v).collect();
            rotation.matvec(&scaled).iter().zip(&offset).map(|(a, b)| a + b).collect()
        })
        .collect();
    // shuffle lattice assignment so source order carries no information
    for i in (1..n_sources).rev() {
        let j = rng.below(i + 1);
        thetas.swap(i, j);
    }
    let hidden = rng.below(n_sources);
    thetas.push(thetas[hidden].clone());
    let c2 = thetas.iter().map(|v| norm(v)).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    let tasks = thetas
        .into_iter()
        .zip(sigma2)
        .map(|(th, &s2)| TaskSpec::isotropic(th, s2))
        .collect::<Result<Vec<_>>>()?;
    let bounds = Bounds { c0: 1.0, c1: 1.0, c2: Some(c2) };
    Ok(Problem::new(tasks, bounds)?.with_hidden_source(Some(hidden)))
}

/// Variant of the hard diversity instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardVariant {
    /// First k tasks orthogonal, the rest copies of β_1.
    Base,
    /// As `Base`, but block `m` (1-based, tasks `(m−1)k .. mk−1`) carries `2β_1 … 2β_k`.
    Block(usize),
}

/// Hard instance for diversity: k orthogonal coefficient vectors with
/// `‖β_i‖² = λ`, the remaining T−k tasks duplicating β_1. B* is a random
/// `d × k` matrix with orthonormal columns.
pub fn gen_hard_diversity_instance(
    d: usize,
    t: usize,
    k: usize,
    lambda: f64,
    variant: HardVariant,
    sigma2: f64,
    rng: &mut RngStream,
) -> Result<StructuredProblem> {
    if t <= k {
        return Err(Error::InvalidConfig(format!("need T > k, got T = {t}, k = {k}")));
    }
    if k == 0 || k > d {
        return Err(Error::InvalidConfig(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidConfig(format!("lambda must be positive, got {lambda}")));
    }
    let blocks = t / k;
    if let HardVariant::Block(m) = variant {
        if m == 0 || m > blocks {
            return Err(Error::InvalidConfig(format!("block {m} outside 1..={blocks}")));
        }
    }
    let scale = lambda.sqrt();
    let basis = |i: usize, s: f64| -> Vec<f64> {
        let mut b = vec![0.0; k];
        b[i] = s;
        b
    };
    let mut betas: Vec<Vec<f64>> =
        (0..t).map(|i| if i < k { basis(i, scale) } else { basis(0, scale) }).collect();
    if let HardVariant::Block(m) = variant {
        for j in 0..k {
            betas[(m - 1) * k + j] = basis(j, 2.0 * scale);
        }
    }
    let c5 = betas.iter().map(|b| crate::numerics::dot(b, b)).fold(0.0, f64::max);
    let b_star = random_orthonormal(d, k, rng)?;
    let bounds = StructuredBounds { c0: 1.0, c1: 1.0, c4: 1.0, c5 };
    StructuredProblem::new(b_star, betas, sigma2, Matrix::identity(d), bounds, Some(lambda))
}

/// Δ_{t1,t2} = ‖θ_{t1}* − θ_{t2}*‖₂.
pub fn transfer_distance(problem: &Problem, t1: usize, t2: usize) -> Result<f64> {
    problem.transfer_distance(t1, t2)
}
