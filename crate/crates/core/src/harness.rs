//! Experiment harness: flat JSON configs, replicated runs, calibration of the
//! confidence-width constant, parameter sweeps and the five-task SGD
//! experiment preset.
//!
//! Configs are JSON objects with `//` and `/* */` comments allowed. Keys are
//! flat and dotted (`"problem.d": 3`); nested objects are flattened into the
//! same form. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimators::{confidence_width, two_phase_fit, ConfidenceSet, WidthParams};
use crate::metrics::{purpose, run_replication, structured_diversity, Algorithm, MeanEstimate};
use crate::numerics::{dist_sq, RngStream};
use crate::problems::{
    gen_hard_diversity_instance, gen_identical_source_problem, gen_random_problem, AnyProblem, Bounds,
    CovarianceMode, HardVariant, StructuredBounds,
};
use crate::schedulers::{collect, warmup_size, GainSchedulerMode, OfuParams, SchedulerSpec, UniformScheduler};
use crate::sgd::StepRule;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "CURRLAB_THREADS";

/// Largest α tried by [`calibrate_alpha`].
pub const MAX_ALPHA: f64 = (1u64 << 20) as f64;

/// Column layout of the `run` CSV.
pub const RUN_CSV_HEADER: [&str; 11] =
    ["rep", "seed", "config_hash", "scheduler", "algorithm", "n", "excess_risk", "mse", "lambda_nk", "diversity", "counts"];

/// Column layout of the `sweep` CSV.
pub const SWEEP_CSV_HEADER: [&str; 8] = ["axis", "value", "scheduler", "algorithm", "metric", "mean", "stderr", "reps"];

/// Removes `//` line comments and `/* */` block comments outside strings.
pub fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    let mut in_str = false;
    while let Some(c) = chars.next() {
        if in_str {
            out.push(c);
            if c == '\\' {
                if let Some(n) = chars.next() {
                    out.push(n);
                }
            } else if c == '"' {
                in_str = false;
            }
            continue;
        }
        match (c, chars.peek()) {
            ('"', _) => {
                in_str = true;
                out.push(c);
            }
            ('/', Some('/')) => {
                for n in chars.by_ref() {
                    if n == '\n' {
                        out.push('\n');
                        break;
                    }
                }
            }
            ('/', Some('*')) => {
                chars.next();
                let mut prev = ' ';
                for n in chars.by_ref() {
                    if prev == '*' && n == '/' {
                        break;
                    }
                    prev = n;
                }
                out.push(' ');
            }
            _ => out.push(c),
        }
    }
    out
}

fn flatten_into(prefix: &str, value: Value, out: &mut BTreeMap<String, Value>) -> Result<()> {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
                flatten_into(&key, v, out)?;
            }
            Ok(())
        }
        other => {
            if out.insert(prefix.to_string(), other).is_some() {
                return Err(Error::InvalidConfig(format!("duplicate key {prefix}")));
            }
            Ok(())
        }
    }
}

/// Parses config text into flat dotted keys.
pub fn parse_flat(text: &str) -> Result<BTreeMap<String, Value>> {
    let value: Value = serde_json::from_str(&strip_comments(text))
        .map_err(|e| Error::InvalidConfig(format!("config is not valid JSON: {e}")))?;
    if !value.is_object() {
        return Err(Error::InvalidConfig("config must be a JSON object".into()));
    }
    let mut out = BTreeMap::new();
    flatten_into("", value, &mut out)?;
    Ok(out)
}

/// Noise variances: one shared value or one per task.
#[derive(Debug, Clone, PartialEq)]
pub enum Sigma2 {
    Scalar(f64),
    List(Vec<f64>),
}

impl Sigma2 {
    pub fn resolve(&self, t: usize) -> Result<Vec<f64>> {
        match self {
            Sigma2::Scalar(s) => Ok(vec![*s; t]),
            Sigma2::List(v) if v.len() == t => Ok(v.clone()),
            Sigma2::List(v) => Err(Error::InvalidConfig(format!("problem.sigma2 has {} entries for T = {t}", v.len()))),
        }
    }

    fn shared(&self) -> Result<f64> {
        match self {
            Sigma2::Scalar(s) => Ok(*s),
            Sigma2::List(v) if !v.is_empty() && v.iter().all(|x| *x == v[0]) => Ok(v[0]),
            Sigma2::List(_) => Err(Error::InvalidConfig("low-rank problems need a single shared sigma2".into())),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            Sigma2::Scalar(s) => Value::from(*s),
            Sigma2::List(v) => Value::from(v.clone()),
        }
    }
}

/// Which generator builds the problem.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemKind {
    Random,
    IdenticalSource,
    HardDiversity,
    /// Problem JSON document on disk.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    pub d: usize,
    pub t: usize,
    pub sigma2: Sigma2,
    pub coef_std: f64,
    pub covariance: CovarianceMode,
    /// Separation scale of identical-source instances.
    pub delta: f64,
    pub k: usize,
    pub lambda: f64,
    pub variant: HardVariant,
    /// Draw a fresh problem for every replication.
    pub per_rep: bool,
}

/// Assumption constants and scheduler constants. `None` keeps the value the
/// generator derives from the instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c0: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c4: Option<f64>,
    pub c5: Option<f64>,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub schedulers: Vec<String>,
    pub algorithm: String,
    /// Per-scheduler algorithms, parallel to `schedulers`; empty means
    /// `algorithm` for all.
    pub algorithms: Vec<String>,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub step_rule: StepRule,
    pub constants: Constants,
    /// Rank used by the optimistic scheduler and the two-phase estimator;
    /// defaults to `problem.k`.
    pub rank: Option<usize>,
    pub refit_every: Option<usize>,
    pub estimate_sigma2: bool,
    pub validation_size: usize,
    pub checkpoints: usize,
    pub output: PathBuf,
}

struct Keys(BTreeMap<String, Value>);

impl Keys {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.0.remove(key).filter(|v| !v.is_null())
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key)
            .map(|v| v.as_f64().ok_or_else(|| Error::InvalidConfig(format!("{key} must be a number"))))
            .transpose()
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        Ok(self.opt_usize(key)?.unwrap_or(default))
    }

    fn opt_usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.take(key)
            .map(|v| {
                v.as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| Error::InvalidConfig(format!("{key} must be a nonnegative integer")))
            })
            .transpose()
    }

    fn string(&mut self, key: &str, default: &str) -> Result<String> {
        match self.take(key) {
            None => Ok(default.to_string()),
            Some(Value::String(s)) => Ok(s),
            Some(_) => Err(Error::InvalidConfig(format!("{key} must be a string"))),
        }
    }

    fn bool(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.take(key) {
            None => Ok(default),
            Some(Value::Bool(b)) => Ok(b),
            Some(_) => Err(Error::InvalidConfig(format!("{key} must be true or false"))),
        }
    }
}

fn parse_variant(s: &str) -> Result<HardVariant> {
    if s == "base" {
        return Ok(HardVariant::Base);
    }
    s.strip_prefix("block:")
        .and_then(|m| m.parse().ok())
        .map(HardVariant::Block)
        .ok_or_else(|| Error::InvalidConfig(format!("problem.variant must be base or block:m, got {s}")))
}

fn variant_label(v: HardVariant) -> String {
    match v {
        HardVariant::Base => "base".into(),
        HardVariant::Block(m) => format!("block:{m}"),
    }
}

/// Checks a scheduler name without building it.
pub fn validate_scheduler_name(name: &str) -> Result<()> {
    match name {
        "uniform" | "oracle_fixed" | "source_selection" | "ofu" | "gain_accurate" | "gain_accurate_sampled"
        | "gain_accurate_lookahead" | "gain_estimated" => Ok(()),
        _ => match name.strip_prefix("single:").map(str::parse::<usize>) {
            Some(Ok(_)) => Ok(()),
            _ => Err(Error::InvalidConfig(format!("unknown scheduler {name}"))),
        },
    }
}

fn validate_algorithm_name(name: &str) -> Result<()> {
    match name {
        "pooled_ols" | "target_ols" | "source_selection" | "two_phase" | "sgd_final" | "sgd_average" => Ok(()),
        _ => Err(Error::InvalidConfig(format!("unknown algorithm {name}"))),
    }
}

impl ExperimentConfig {
    /// Defaults: the five-task random family with uniform scheduling and
    /// target-only OLS.
    pub fn defaults() -> Self {
        Self::from_flat(BTreeMap::new()).expect("defaults are valid")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_flat(parse_flat(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn from_flat(map: BTreeMap<String, Value>) -> Result<Self> {
        let mut k = Keys(map);
        let kind = match k.string("problem.kind", "random")?.as_str() {
            "random" => ProblemKind::Random,
            "identical_source" => ProblemKind::IdenticalSource,
            "hard_diversity" => ProblemKind::HardDiversity,
            "file" => ProblemKind::File(PathBuf::from(k.string("problem.path", "")?)),
            other => return Err(Error::InvalidConfig(format!("unknown problem.kind {other}"))),
        };
        if let ProblemKind::File(p) = &kind {
            if p.as_os_str().is_empty() {
                return Err(Error::InvalidConfig("problem.kind file needs problem.path".into()));
            }
        }
        let sigma2 = match k.take("problem.sigma2") {
            None => Sigma2::List(vec![0.05, 0.1, 0.5, 1.0, 2.0]),
            Some(Value::Array(a)) => Sigma2::List(
                a.iter()
                    .map(|v| v.as_f64().ok_or_else(|| Error::InvalidConfig("problem.sigma2 entries must be numbers".into())))
                    .collect::<Result<_>>()?,
            ),
            Some(v) => Sigma2::Scalar(v.as_f64().ok_or_else(|| Error::InvalidConfig("problem.sigma2 must be a number or list".into()))?),
        };
        let covariance = match k.string("problem.covariance", "identity")?.as_str() {
            "identity" => CovarianceMode::Identity,
            "random_spd" => CovarianceMode::RandomSpd { c1: 0.5, c0: 2.0 },
            other => return Err(Error::InvalidConfig(format!("unknown problem.covariance {other}"))),
        };
        let per_rep = match k.string("problem.resample", "per_rep")?.as_str() {
            "per_rep" => true,
            "fixed" => false,
            other => return Err(Error::InvalidConfig(format!("problem.resample must be per_rep or fixed, got {other}"))),
        };
        let problem = ProblemConfig {
            kind,
            d: k.usize("problem.d", 3)?,
            t: k.usize("problem.T", 5)?,
            sigma2,
            coef_std: k.f64("problem.coef_std", 0.1f64.sqrt())?,
            covariance,
            delta: k.f64("problem.delta", 1.0)?,
            k: k.usize("problem.k", 1)?,
            lambda: k.f64("problem.lambda", 1.0)?,
            variant: parse_variant(&k.string("problem.variant", "base")?)?,
            per_rep,
        };

        let single = k.take("scheduler.kind");
        let many = k.take("scheduler.kinds");
        let schedulers = match (single, many) {
            (Some(_), Some(_)) => return Err(Error::InvalidConfig("give scheduler.kind or scheduler.kinds, not both".into())),
            (Some(Value::String(s)), None) => vec![s],
            (None, Some(Value::Array(a))) => a
                .into_iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s),
                    _ => Err(Error::InvalidConfig("scheduler.kinds entries must be strings".into())),
                })
                .collect::<Result<_>>()?,
            (None, None) => vec!["uniform".into()],
            _ => return Err(Error::InvalidConfig("scheduler.kind must be a string, scheduler.kinds a list".into())),
        };
        if schedulers.is_empty() {
            return Err(Error::InvalidConfig("at least one scheduler is required".into()));
        }
        for s in &schedulers {
            validate_scheduler_name(s)?;
        }
        let algorithm = k.string("algorithm", "target_ols")?;
        validate_algorithm_name(&algorithm)?;
        let algorithms = match k.take("scheduler.algorithms") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .into_iter()
                .map(|v| match v {
                    Value::String(s) => validate_algorithm_name(&s).map(|_| s),
                    _ => Err(Error::InvalidConfig("scheduler.algorithms entries must be strings".into())),
                })
                .collect::<Result<_>>()?,
            Some(_) => return Err(Error::InvalidConfig("scheduler.algorithms must be a list".into())),
        };
        if !algorithms.is_empty() && algorithms.len() != schedulers.len() {
            return Err(Error::InvalidConfig(format!(
                "scheduler.algorithms has {} entries for {} schedulers",
                algorithms.len(),
                schedulers.len()
            )));
        }

        let constants = Constants {
            c0: k.opt_f64("constants.C0")?,
            c1: k.opt_f64("constants.C1")?,
            c2: k.opt_f64("constants.C2")?,
            c4: k.opt_f64("constants.C4")?,
            c5: k.opt_f64("constants.C5")?,
            alpha: k.f64("constants.alpha", 1.0)?,
            gamma: k.f64("constants.gamma", 1.0)?,
            delta: k.f64("constants.delta", 0.1)?,
        };
        let cfg = Self {
            problem,
            schedulers,
            algorithm,
            algorithms,
            n: k.usize("n", 1000)?,
            reps: k.usize("reps", 100)?,
            seed: k.opt_usize("seed")?.unwrap_or(0) as u64,
            step_rule: StepRule::parse(&k.string("step_rule", "inv_di")?)?,
            constants,
            rank: k.opt_usize("scheduler.k")?,
            refit_every: k.opt_usize("scheduler.refit_every")?,
            estimate_sigma2: k.bool("scheduler.estimate_sigma2", false)?,
            validation_size: k.usize("scheduler.validation_size", 50)?,
            checkpoints: k.usize("calibrate.checkpoints", 4)?,
            output: PathBuf::from(k.string("output", "out")?),
        };
        if let Some(key) = k.0.keys().next() {
            return Err(Error::InvalidConfig(format!("unknown config key {key}")));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let c = &self.constants;
        let positive = [("C0", c.c0), ("C1", c.c1), ("C2", c.c2), ("C4", c.c4), ("C5", c.c5)];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidConfig(format!("constants.{name} must be positive")));
                }
            }
        }
        if !(c.alpha > 0.0 && c.gamma > 0.0 && c.delta > 0.0 && c.delta < 1.0) {
            return Err(Error::InvalidConfig("need alpha > 0, gamma > 0 and 0 < delta < 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be positive".into()));
        }
        if self.checkpoints == 0 {
            return Err(Error::InvalidConfig("calibrate.checkpoints must be positive".into()));
        }
        match self.problem.kind {
            ProblemKind::Random | ProblemKind::IdenticalSource => {
                self.problem.sigma2.resolve(self.problem.t)?;
            }
            ProblemKind::HardDiversity => {
                self.problem.sigma2.shared()?;
            }
            ProblemKind::File(_) => {}
        }
        Ok(())
    }

    /// Every resolved key, in sorted order.
    pub fn to_flat(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        let p = &self.problem;
        let (kind, path) = match &p.kind {
            ProblemKind::Random => ("random", None),
            ProblemKind::IdenticalSource => ("identical_source", None),
            ProblemKind::HardDiversity => ("hard_diversity", None),
            ProblemKind::File(path) => ("file", Some(path.display().to_string())),
        };
        m.insert("problem.kind".into(), kind.into());
        if let Some(path) = path {
            m.insert("problem.path".into(), path.into());
        }
        m.insert("problem.d".into(), p.d.into());
        m.insert("problem.T".into(), p.t.into());
        m.insert("problem.sigma2".into(), p.sigma2.to_value());
        m.insert("problem.coef_std".into(), p.coef_std.into());
        let cov = match p.covariance {
            CovarianceMode::Identity => "identity",
            CovarianceMode::RandomSpd { .. } => "random_spd",
        };
        m.insert("problem.covariance".into(), cov.into());
        m.insert("problem.delta".into(), p.delta.into());
        m.insert("problem.k".into(), p.k.into());
        m.insert("problem.lambda".into(), p.lambda.into());
        m.insert("problem.variant".into(), variant_label(p.variant).into());
        m.insert("problem.resample".into(), (if p.per_rep { "per_rep" } else { "fixed" }).into());
        m.insert("scheduler.kinds".into(), Value::from(self.schedulers.clone()));
        m.insert("scheduler.k".into(), self.rank.into());
        m.insert("scheduler.refit_every".into(), self.refit_every.into());
        m.insert("scheduler.estimate_sigma2".into(), self.estimate_sigma2.into());
        m.insert("scheduler.validation_size".into(), self.validation_size.into());
        m.insert("algorithm".into(), self.algorithm.clone().into());
        m.insert("scheduler.algorithms".into(), Value::from(self.algorithms.clone()));
        m.insert("n".into(), self.n.into());
        m.insert("reps".into(), self.reps.into());
        m.insert("seed".into(), self.seed.into());
        m.insert("step_rule".into(), self.step_rule.label().into());
        let c = &self.constants;
        for (name, v) in [("C0", c.c0), ("C1", c.c1), ("C2", c.c2), ("C4", c.c4), ("C5", c.c5)] {
            m.insert(format!("constants.{name}"), v.into());
        }
        m.insert("constants.alpha".into(), c.alpha.into());
        m.insert("constants.gamma".into(), c.gamma.into());
        m.insert("constants.delta".into(), c.delta.into());
        m.insert("calibrate.checkpoints".into(), self.checkpoints.into());
        m.insert("output".into(), self.output.display().to_string().into());
        m
    }

    /// Canonical JSON of the resolved config (sorted keys, compact).
    pub fn canonical_json(&self) -> String {
        let map: Map<String, Value> = self.to_flat().into_iter().collect();
        serde_json::to_string(&Value::Object(map)).expect("config serializes")
    }

    /// SHA-256 of [`canonical_json`](Self::canonical_json), hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    /// Problem for replication `rep` (the same problem for every rep when
    /// `problem.resample` is `fixed`).
    pub fn build_problem(&self, rep: u64) -> Result<AnyProblem> {
        let p = &self.problem;
        let mut rng = if p.per_rep {
            RngStream::for_parts(self.seed, &[rep, purpose::PROBLEM])
        } else {
            RngStream::for_parts(self.seed, &[purpose::PROBLEM])
        };
        let covariance = match p.covariance {
            CovarianceMode::Identity => CovarianceMode::Identity,
            CovarianceMode::RandomSpd { c1, c0 } => {
                CovarianceMode::RandomSpd { c1: self.constants.c1.unwrap_or(c1), c0: self.constants.c0.unwrap_or(c0) }
            }
        };
        let base: AnyProblem = match &p.kind {
            ProblemKind::Random => {
                gen_random_problem(p.d, p.t, &p.sigma2.resolve(p.t)?, p.coef_std, covariance, &mut rng)?.into()
            }
            ProblemKind::IdenticalSource => {
                gen_identical_source_problem(p.d, p.t, p.delta, &p.sigma2.resolve(p.t)?, &mut rng)?.into()
            }
            ProblemKind::HardDiversity => {
                gen_hard_diversity_instance(p.d, p.t, p.k, p.lambda, p.variant, p.sigma2.shared()?, &mut rng)?.into()
            }
            ProblemKind::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidConfig(format!("cannot read problem {}: {e}", path.display())))?;
                AnyProblem::from_json(&text)?
            }
        };
        self.apply_bounds(base)
    }

    fn apply_bounds(&self, problem: AnyProblem) -> Result<AnyProblem> {
        let c = &self.constants;
        match problem {
            AnyProblem::Unstructured(p) => {
                if c.c0.is_none() && c.c1.is_none() && c.c2.is_none() {
                    return Ok(p.into());
                }
                let b = p.bounds();
                let nb = Bounds { c0: c.c0.unwrap_or(b.c0), c1: c.c1.unwrap_or(b.c1), c2: c.c2.or(b.c2) };
                Ok(p.with_bounds(nb)?.into())
            }
            AnyProblem::Structured(s) => {
                if c.c0.is_none() && c.c1.is_none() && c.c4.is_none() && c.c5.is_none() {
                    return Ok(s.into());
                }
                let b = s.bounds();
                let nb = StructuredBounds {
                    c0: c.c0.unwrap_or(b.c0),
                    c1: c.c1.unwrap_or(b.c1),
                    c4: c.c4.unwrap_or(b.c4),
                    c5: c.c5.unwrap_or(b.c5),
                };
                Ok(s.with_bounds(nb)?.into())
            }
        }
    }

    fn rank_for(&self, problem: &AnyProblem) -> usize {
        self.rank.unwrap_or_else(|| problem.structured().map_or(self.problem.k, |s| s.rank()))
    }

    pub fn ofu_params(&self, problem: &AnyProblem) -> OfuParams {
        let mut p = OfuParams::new(self.rank_for(problem));
        p.alpha = self.constants.alpha;
        p.gamma = self.constants.gamma;
        p.delta = self.constants.delta;
        p.refit_every = self.refit_every;
        p.estimate_sigma2 = self.estimate_sigma2;
        p
    }

    pub fn scheduler_spec(&self, name: &str, problem: &AnyProblem) -> Result<SchedulerSpec> {
        Ok(match name {
            "uniform" => SchedulerSpec::Uniform,
            "oracle_fixed" => SchedulerSpec::OracleFixed,
            "source_selection" => SchedulerSpec::SourceSelection,
            "ofu" => SchedulerSpec::Ofu(self.ofu_params(problem)),
            "gain_accurate" => SchedulerSpec::PredictionGain(GainSchedulerMode::Accurate),
            "gain_accurate_sampled" => SchedulerSpec::PredictionGain(GainSchedulerMode::AccurateSampled),
            "gain_accurate_lookahead" => SchedulerSpec::PredictionGain(GainSchedulerMode::AccurateLookahead),
            "gain_estimated" => {
                SchedulerSpec::PredictionGain(GainSchedulerMode::Estimated { validation_size: self.validation_size })
            }
            other => match other.strip_prefix("single:").and_then(|t| t.parse().ok()) {
                Some(t) => SchedulerSpec::Single(t),
                None => return Err(Error::InvalidConfig(format!("unknown scheduler {other}"))),
            },
        })
    }

    /// Algorithm paired with scheduler number `index`.
    pub fn algorithm_for(&self, index: usize, problem: &AnyProblem) -> Result<Algorithm> {
        let name = self.algorithms.get(index).unwrap_or(&self.algorithm);
        Ok(match name.as_str() {
            "pooled_ols" => Algorithm::PooledOls,
            "target_ols" => Algorithm::TargetOls,
            "source_selection" => Algorithm::SourceSelection,
            "two_phase" => Algorithm::TwoPhase { k: self.rank_for(problem) },
            "sgd_final" => Algorithm::SgdFinal(self.step_rule),
            "sgd_average" => Algorithm::SgdAverage(self.step_rule),
            other => return Err(Error::InvalidConfig(format!("unknown algorithm {other}"))),
        })
    }
}

/// Runs `f` on a pool capped by `CURRLAB_THREADS` when it is set.
pub fn with_threads<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::InvalidConfig(format!("{THREADS_ENV} must be a positive integer, got {v}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

/// Result of one replication under one scheduler.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub seed: u64,
    pub rep: u64,
    pub scheduler: String,
    pub algorithm: String,
    pub n: usize,
    pub excess_risk: f64,
    /// `‖θ̂ − θ_T*‖² / d`.
    pub mse: f64,
    pub lambda_nk: Option<f64>,
    pub diversity: Option<f64>,
    pub counts: Vec<usize>,
    /// Not written to the CSV, which must be byte-identical across reruns.
    #[serde(skip)]
    pub wall_seconds: f64,
}

/// Aggregates for one scheduler.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchedulerSummary {
    pub scheduler: String,
    pub algorithm: String,
    pub excess_risk: MeanEstimate,
    pub mse: MeanEstimate,
    pub diversity: Option<MeanEstimate>,
    /// Mean share of samples drawn from each task.
    pub selection_frequencies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
    pub summaries: Vec<SchedulerSummary>,
    pub wall_seconds: f64,
}

fn run_one(cfg: &ExperimentConfig, hash: &str, rep: u64, index: usize) -> Result<RunRecord> {
    let name = cfg.schedulers[index].as_str();
    let start = Instant::now();
    let problem = cfg.build_problem(rep)?;
    let spec = cfg.scheduler_spec(name, &problem)?;
    let algorithm = cfg.algorithm_for(index, &problem)?;
    let out = run_replication(&problem, &spec, algorithm, cfg.n, cfg.seed, rep)?;
    let p = problem.as_problem();
    let target = &p.target().theta_star;
    let mse = dist_sq(&out.estimate, target) / p.dim() as f64;
    let div = problem.structured().map(|s| structured_diversity(s, &out.schedule)).transpose()?;
    Ok(RunRecord {
        config_hash: hash.to_string(),
        seed: cfg.seed,
        rep,
        scheduler: name.to_string(),
        algorithm: algorithm.label(),
        n: cfg.n,
        excess_risk: out.excess_risk,
        mse,
        lambda_nk: div.as_ref().map(|d| d.lambda_nk),
        diversity: div.as_ref().map(|d| d.normalized),
        counts: out.schedule.counts,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Records are rep-major, so scheduler `i` owns every `S`-th record from `i`.
fn summarize(records: &[RunRecord], schedulers: &[String]) -> Vec<SchedulerSummary> {
    schedulers
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let rs: Vec<&RunRecord> = records.iter().skip(i).step_by(schedulers.len()).collect();
            let pick = |f: &dyn Fn(&RunRecord) -> f64| MeanEstimate::from_values(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
            let diversity = if rs.iter().all(|r| r.diversity.is_some()) && !rs.is_empty() {
                Some(pick(&|r| r.diversity.unwrap_or(f64::NAN)))
            } else {
                None
            };
            let t = rs.first().map_or(0, |r| r.counts.len());
            let mut freq = vec![0.0; t];
            for r in &rs {
                let total: usize = r.counts.iter().sum();
                for (f, c) in freq.iter_mut().zip(&r.counts) {
                    *f += *c as f64 / total.max(1) as f64;
                }
            }
            freq.iter_mut().for_each(|f| *f /= rs.len().max(1) as f64);
            SchedulerSummary {
                scheduler: name.clone(),
                algorithm: rs.first().map(|r| r.algorithm.clone()).unwrap_or_default(),
                excess_risk: pick(&|r| r.excess_risk),
                mse: pick(&|r| r.mse),
                diversity,
                selection_frequencies: freq,
            }
        })
        .collect()
}

/// Runs every (rep, scheduler) pair; records come back in rep-major order
/// whatever the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let hash = cfg.hash();
    let jobs: Vec<(u64, usize)> =
        (0..cfg.reps as u64).flat_map(|rep| (0..cfg.schedulers.len()).map(move |i| (rep, i))).collect();
    let records = with_threads(|| {
        jobs.par_iter().map(|&(rep, i)| run_one(cfg, &hash, rep, i)).collect::<Result<Vec<_>>>()
    })??;
    let summaries = summarize(&records, &cfg.schedulers);
    Ok(RunOutput { config: cfg.clone(), records, summaries, wall_seconds: start.elapsed().as_secs_f64() })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `runs.csv` (one row per replication and scheduler) and
/// `summary.json` into `dir`.
pub fn write_run(out: &RunOutput, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join("runs.csv");
    let mut w = csv_writer(&csv_path)?;
    w.write_record(RUN_CSV_HEADER)?;
    for r in &out.records {
        let counts = r.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";");
        w.write_record([
            r.rep.to_string(),
            r.seed.to_string(),
            r.config_hash.clone(),
            r.scheduler.clone(),
            r.algorithm.clone(),
            r.n.to_string(),
            r.excess_risk.to_string(),
            r.mse.to_string(),
            fmt_opt(r.lambda_nk),
            fmt_opt(r.diversity),
            counts,
        ])?;
    }
    w.flush()?;
    let json_path = dir.join("summary.json");
    std::fs::write(&json_path, summary_json(out)?)?;
    Ok((csv_path, json_path))
}

/// Summary document: config echo and hash, per-scheduler aggregates.
pub fn summary_json(out: &RunOutput) -> Result<String> {
    let config: Map<String, Value> = out.config.to_flat().into_iter().collect();
    let doc = serde_json::json!({
        "config": config,
        "config_hash": out.config.hash(),
        "schedulers": out.summaries,
        "wall_seconds": out.wall_seconds,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Loads, runs and writes a config; `output` overrides the config's path.
pub fn cmd_run(config: &Path, output: Option<&Path>) -> Result<RunOutput> {
    let cfg = ExperimentConfig::load(config)?;
    let out = run_experiment(&cfg)?;
    write_run(&out, output.unwrap_or(&cfg.output))?;
    Ok(out)
}

/// Preset of the five-task SGD experiment; `gain` names the prediction-gain
/// scheduler compared against the oracle fixed task.
pub fn reproduce_config(seed: u64, reps: usize, gain: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::defaults();
    cfg.problem.kind = ProblemKind::Random;
    cfg.problem.d = 3;
    cfg.problem.t = 5;
    cfg.problem.sigma2 = Sigma2::List(vec![0.05, 0.1, 0.5, 1.0, 2.0]);
    cfg.problem.coef_std = 0.1f64.sqrt();
    cfg.problem.per_rep = true;
    cfg.n = 1000;
    cfg.reps = reps;
    cfg.seed = seed;
    cfg.step_rule = StepRule::InvDI;
    cfg.algorithm = "sgd_final".into();
    validate_scheduler_name(gain)?;
    if !gain.starts_with("gain_") {
        return Err(Error::InvalidConfig(format!("{gain} is not a prediction-gain scheduler")));
    }
    cfg.schedulers = vec![gain.to_string(), "oracle_fixed".into()];
    cfg.output = PathBuf::from("reproduce");
    cfg.validate()?;
    Ok(cfg)
}

/// Outcome of the five-task SGD experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceReport {
    pub run: RunOutput,
    pub gain: SchedulerSummary,
    pub fixed: SchedulerSummary,
}

impl ReproduceReport {
    /// Mean MSE of the gain scheduler over the fixed scheduler's.
    pub fn ratio(&self) -> f64 {
        self.gain.mse.mean / self.fixed.mse.mean
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let cfg = &self.run.config;
        let _ = writeln!(
            s,
            "five-task SGD experiment: d = {}, T = {}, N = {}, reps = {}, seed = {}",
            cfg.problem.d, cfg.problem.t, cfg.n, cfg.reps, cfg.seed
        );
        let _ = writeln!(s, "{:<26} {:>12} {:>12} {:>12}   selection frequencies", "scheduler", "mean MSE", "stderr", "excess");
        for r in [&self.gain, &self.fixed] {
            let freq = r.selection_frequencies.iter().map(|f| format!("{f:.3}")).collect::<Vec<_>>().join(" ");
            let _ = writeln!(
                s,
                "{:<26} {:>12.6} {:>12.6} {:>12.6}   [{freq}]",
                r.scheduler, r.mse.mean, r.mse.stderr, r.excess_risk.mean
            );
        }
        let _ = writeln!(s, "ratio gain/fixed = {:.4}", self.ratio());
        s
    }
}

pub fn reproduce_paper(seed: u64, reps: usize, gain: &str) -> Result<ReproduceReport> {
    let cfg = reproduce_config(seed, reps, gain)?;
    let run = run_experiment(&cfg)?;
    let gain = run.summaries[0].clone();
    let fixed = run.summaries[1].clone();
    Ok(ReproduceReport { run, gain, fixed })
}

/// Squared errors and unit-α widths of every (seed, checkpoint, task) event.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverageEvents {
    pub errors: Vec<f64>,
    pub unit_widths: Vec<f64>,
}

impl CoverageEvents {
    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    /// Fraction of events whose true parameter lies in the ball of width
    /// `alpha · unit_width`.
    pub fn coverage(&self, alpha: f64) -> f64 {
        if self.errors.is_empty() {
            return f64::NAN;
        }
        let hits = self
            .errors
            .iter()
            .zip(&self.unit_widths)
            .filter(|(e, w)| ConfidenceSet::covers(**e, alpha * **w))
            .count();
        hits as f64 / self.errors.len() as f64
    }
}

/// Coverage events for replications `reps`: uniform collection of `n`
/// samples, two-phase fits at `checkpoints` evenly spaced points after the
/// warm-up.
pub fn coverage_events(cfg: &ExperimentConfig, reps: std::ops::Range<u64>) -> Result<CoverageEvents> {
    let per_rep = with_threads(|| {
        reps.clone().into_par_iter().map(|rep| coverage_events_one(cfg, rep)).collect::<Result<Vec<_>>>()
    })??;
    let mut ev = CoverageEvents::default();
    for e in per_rep {
        ev.errors.extend(e.errors);
        ev.unit_widths.extend(e.unit_widths);
    }
    Ok(ev)
}

fn coverage_events_one(cfg: &ExperimentConfig, rep: u64) -> Result<CoverageEvents> {
    let problem = cfg.build_problem(rep)?;
    let s = problem
        .structured()
        .ok_or_else(|| Error::Unsupported("alpha calibration needs a low-rank problem".into()))?;
    let k = cfg.rank_for(&problem);
    let t = s.num_tasks();
    let d = s.dim();
    let b = s.bounds();
    let width = WidthParams {
        alpha: 1.0,
        c0: b.c0,
        c1: b.c1,
        c5: b.c5,
        sigma2: s.sigma2(),
        d,
        k,
        n_total: cfg.n,
        t_count: t,
        delta: cfg.constants.delta,
    };
    let start = (warmup_size(cfg.constants.gamma, d, cfg.n, cfg.constants.delta) * t).max(2 * t);
    if cfg.n < start {
        return Err(Error::InvalidConfig(format!("n = {} is below the warm-up total {start}", cfg.n)));
    }
    let samples = RngStream::for_parts(cfg.seed, &[rep, purpose::SAMPLES]);
    let state = collect(s.as_problem(), &mut UniformScheduler::new(t), cfg.n, &samples)?;
    let mut fit_rng = RngStream::for_parts(cfg.seed, &[rep, purpose::ESTIMATOR]);
    let mut ev = CoverageEvents::default();
    let m = cfg.checkpoints;
    for c in 1..=m {
        let steps = if m == 1 { cfg.n } else { start + (cfg.n - start) * (c - 1) / (m - 1) };
        let counts: Vec<usize> = (0..t).map(|task| steps / t + usize::from(task < steps % t)).collect();
        let batches: Vec<_> = state.buffers.iter().zip(&counts).map(|(b, &n)| b.slice(0, n)).collect();
        let fit = two_phase_fit(&batches, k, &mut fit_rng)?;
        for (task, &n) in counts.iter().enumerate() {
            ev.errors.push(dist_sq(&fit.prediction(task), s.theta(task)));
            ev.unit_widths.push(confidence_width(n, &width)?);
        }
    }
    Ok(ev)
}

/// Outcome of the α doubling search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub alpha: f64,
    pub coverage: f64,
    pub target: f64,
    pub events: usize,
    /// `(α, coverage)` for every α tried.
    pub trail: Vec<(f64, f64)>,
}

/// Smallest power of two `α ≥ 1` whose coverage of the given events
/// reaches `target`.
pub fn calibrate_from_events(events: &CoverageEvents, target: f64) -> Result<Calibration> {
    if events.is_empty() {
        return Err(Error::InsufficientData("no coverage events".into()));
    }
    let mut alpha = 1.0;
    let mut trail = Vec::new();
    loop {
        let coverage = events.coverage(alpha);
        trail.push((alpha, coverage));
        if coverage >= target {
            if alpha > 1.0 {
                assert!(events.coverage(alpha / 2.0) < target, "doubling search skipped a smaller alpha");
            }
            return Ok(Calibration { alpha, coverage, target, events: events.len(), trail });
        }
        if alpha * 2.0 > MAX_ALPHA {
            return Err(Error::CalibrationFailed { alpha, coverage, target });
        }
        alpha *= 2.0;
    }
}

/// Calibrates α on the config's `reps` replications to coverage `1 − δ`
/// (or `target` when given).
pub fn calibrate_alpha(cfg: &ExperimentConfig, target: Option<f64>) -> Result<Calibration> {
    let target = target.unwrap_or(1.0 - cfg.constants.delta);
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::InvalidConfig(format!("target coverage must lie in (0, 1], got {target}")));
    }
    let events = coverage_events(cfg, 0..cfg.reps as u64)?;
    calibrate_from_events(&events, target)
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    N,
    T,
    Sigma,
    Alpha,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "N" | "n" => Ok(SweepAxis::N),
            "T" | "t" => Ok(SweepAxis::T),
            "sigma" => Ok(SweepAxis::Sigma),
            "alpha" => Ok(SweepAxis::Alpha),
            other => Err(Error::InvalidConfig(format!("sweep axis must be N, T, sigma or alpha, got {other}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::N => "N",
            SweepAxis::T => "T",
            SweepAxis::Sigma => "sigma",
            SweepAxis::Alpha => "alpha",
        }
    }

    /// Config with this axis set to `value`. `sigma` sets one shared noise
    /// variance for every task.
    pub fn apply(&self, cfg: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut c = cfg.clone();
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidConfig(format!("{} must be a positive integer, got {v}", self.label())))
            }
        };
        match self {
            SweepAxis::N => c.n = as_count(value)?,
            SweepAxis::T => c.problem.t = as_count(value)?,
            SweepAxis::Sigma => c.problem.sigma2 = Sigma2::Scalar(value),
            SweepAxis::Alpha => c.constants.alpha = value,
        }
        c.validate()?;
        Ok(c)
    }
}

/// One long-format sweep row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: f64,
    pub scheduler: String,
    pub algorithm: String,
    pub metric: String,
    pub estimate: MeanEstimate,
}

/// Runs the config once per value; one excess-risk row per (value,
/// scheduler), plus a diversity row on low-rank problems.
pub fn sweep(cfg: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one value".into()));
    }
    let mut rows = Vec::new();
    for &v in values {
        let out = run_experiment(&axis.apply(cfg, v)?)?;
        for s in out.summaries {
            rows.push(SweepRow {
                axis: axis.label().into(),
                value: v,
                scheduler: s.scheduler.clone(),
                algorithm: s.algorithm.clone(),
                metric: "excess_risk".into(),
                estimate: s.excess_risk,
            });
            if let Some(div) = s.diversity {
                rows.push(SweepRow {
                    axis: axis.label().into(),
                    value: v,
                    scheduler: s.scheduler,
                    algorithm: s.algorithm,
                    metric: "diversity".into(),
                    estimate: div,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_sweep(rows: &[SweepRow], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv_writer(path)?;
    w.write_record(SWEEP_CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.axis.clone(),
            r.value.to_string(),
            r.scheduler.clone(),
            r.algorithm.clone(),
            r.metric.clone(),
            r.estimate.mean.to_string(),
            r.estimate.stderr.to_string(),
            r.estimate.reps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `250,500,1000`.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| Error::InvalidConfig(format!("bad sweep value {v:?}"))))
        .collect()
}

/// Process exit code for an error: 2 for configuration problems, 3 for
/// numerical or runtime failures.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_config_error() {
        2
    } else {
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_are_stripped_outside_strings() {
        let text = "{\n // note\n \"a\": \"x//y\", /* block */ \"b\": 2 // tail\n}";
        let m = parse_flat(text).unwrap();
        assert_eq!(m["a"], Value::from("x//y"));
        assert_eq!(m["b"], Value::from(2));
    }

    #[test]
    fn nested_objects_flatten() {
        let m = parse_flat(r#"{"problem": {"d": 4}, "n": 10}"#).unwrap();
        assert_eq!(m["problem.d"], Value::from(4));
        assert!(parse_flat(r#"{"problem": {"d": 4}, "problem.d": 5}"#).is_err());
    }

    #[test]
    fn hash_ignores_key_order() {
        let a = ExperimentConfig::from_text(r#"{"n": 50, "problem.d": 2, "reps": 3}"#).unwrap();
        let b = ExperimentConfig::from_text(r#"{"reps": 3, "problem": {"d": 2}, "n": 50}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig::from_text(r#"{"reps": 4, "problem.d": 2, "n": 50}"#).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn flat_roundtrip() {
        let a = ExperimentConfig::from_text(
            r#"{"problem.kind": "hard_diversity", "problem.variant": "block:2", "problem.sigma2": 0.25,
                "scheduler.kinds": ["ofu", "uniform"], "constants.C5": 4, "scheduler.refit_every": 3}"#,
        )
        .unwrap();
        let b = ExperimentConfig::from_flat(a.to_flat()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_configs_are_rejected() {
        for text in [
            r#"{"nope": 1}"#,
            r#"{"scheduler.kind": "magic"}"#,
            r#"{"algorithm": "lasso"}"#,
            r#"{"constants.alpha": 0}"#,
            r#"{"problem.sigma2": [1, 2]}"#,
            r#"{"n": -3}"#,
            r#"{"scheduler.algorithms": ["target_ols", "pooled_ols"]}"#,
            r#"{"scheduler.algorithms": ["ridge"]}"#,
            "[1, 2]",
            "{",
        ] {
            let err = ExperimentConfig::from_text(text).unwrap_err();
            assert_eq!(exit_code(&err), 2, "{text}: {err}");
        }
    }

    #[test]
    fn calibration_search_is_minimal() {
        let ev = CoverageEvents { errors: vec![0.5, 3.0, 5.0, 9.0], unit_widths: vec![1.0; 4] };
        let c = calibrate_from_events(&ev, 0.75).unwrap();
        assert_eq!(c.alpha, 8.0);
        assert_eq!(c.coverage, 0.75);
        assert_eq!(c.trail.len(), 4);
        let zero = CoverageEvents { errors: vec![0.0; 3], unit_widths: vec![1.0; 3] };
        assert_eq!(calibrate_from_events(&zero, 0.9).unwrap().alpha, 1.0);
        let hopeless = CoverageEvents { errors: vec![1.0], unit_widths: vec![0.0] };
        assert!(matches!(calibrate_from_events(&hopeless, 0.9), Err(Error::CalibrationFailed { .. })));
    }

    #[test]
    fn sweep_axis_application() {
        let cfg = ExperimentConfig::defaults();
        assert_eq!(SweepAxis::parse("N").unwrap().apply(&cfg, 250.0).unwrap().n, 250);
        assert!(SweepAxis::N.apply(&cfg, 2.5).is_err());
        let s = SweepAxis::Sigma.apply(&cfg, 0.3).unwrap();
        assert_eq!(s.problem.sigma2.resolve(5).unwrap(), vec![0.3; 5]);
        assert!(SweepAxis::T.apply(&cfg, 4.0).is_err());
        assert!(SweepAxis::parse("gamma").is_err());
        assert_eq!(parse_values("1, 2.5,3").unwrap(), vec![1.0, 2.5, 3.0]);
    }
}
