//! Theorem-verification and characteristic-p sweeps, and the manifests they write.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use nilrad::blockstruct::{enumerate_shapes, BlockSeq, Constraint, SeqSampler, Shape};
use nilrad::exactla::Field;
use nilrad::nilradical::{generate_nilradical, rank_table_of};
use nilrad::theory::{self, free_profile, FreeVerdict};

fn default_k_range() -> [usize; 2] {
    [2, 6]
}
fn default_d_max() -> usize {
    4
}
fn default_dim_cap() -> usize {
    14
}
fn default_field() -> String {
    "Q".into()
}
fn default_samples() -> u64 {
    20
}
fn default_entry_bound() -> i64 {
    4
}
fn default_constraints() -> Vec<Constraint> {
    vec![Constraint::NormalizedPhiInvariant, Constraint::Normalized]
}
fn default_general_k() -> Vec<usize> {
    vec![3, 5]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Inclusive range of block counts.
    #[serde(default = "default_k_range")]
    pub k_range: [usize; 2],
    #[serde(default = "default_d_max")]
    pub d_max: usize,
    /// Bound on `|d|`.
    #[serde(default = "default_dim_cap")]
    pub dim_cap: usize,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples_per_shape: u64,
    #[serde(default = "default_entry_bound")]
    pub entry_bound: i64,
    /// Sampling constraints for the general-sequence sweep.
    #[serde(default = "default_constraints")]
    pub constraints: Vec<Constraint>,
    /// Block counts of the odd-symmetric shapes sampled in the general sweep.
    #[serde(default = "default_general_k")]
    pub general_k: Vec<usize>,
    #[serde(default)]
    pub skip_canonical: bool,
    #[serde(default)]
    pub threads: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields defaulted")
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<Field> {
        let [lo, hi] = self.k_range;
        if lo < 2 || hi < lo {
            bail!("k_range must satisfy 2 <= min <= max, got [{lo}, {hi}]");
        }
        if self.d_max == 0 || self.dim_cap < 2 {
            bail!("d_max must be >= 1 and dim_cap >= 2");
        }
        if self.entry_bound < 1 {
            bail!("entry_bound must be >= 1");
        }
        let field = Field::parse(&self.field)?;
        if field != Field::Rational {
            bail!("verify checks characteristic-0 theorems; use `charp` for {field}");
        }
        Ok(field)
    }

    /// The config with the fields that cannot change results cleared.
    pub fn canonical(&self) -> SweepConfig {
        SweepConfig { out: None, threads: 0, ..self.clone() }
    }

    /// SHA-256 of [`SweepConfig::canonical`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(&self.canonical()).expect("serializable")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Canonical,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub shape: Vec<usize>,
    pub check: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<Constraint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<u64>,
    pub dim: usize,
    pub degree: usize,
    pub predicted_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_r1k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<FreeVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_free: Option<FreeVerdict>,
    pub mismatches: Vec<String>,
}

impl InstanceResult {
    fn sort_key(&self) -> (CheckKind, usize, Vec<usize>, String, u64) {
        (
            self.check.clone(),
            self.shape.len(),
            self.shape.clone(),
            self.constraint.map(|c| c.to_string()).unwrap_or_default(),
            self.sample.unwrap_or(0),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub shape: Vec<usize>,
    pub check: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub max_instance_seconds: f64,
    pub mean_instance_seconds: f64,
}

impl Timing {
    fn from(start: Instant, per_instance: &[f64]) -> Timing {
        let n = per_instance.len().max(1) as f64;
        Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
            max_instance_seconds: per_instance.iter().copied().fold(0.0, f64::max),
            mean_instance_seconds: per_instance.iter().sum::<f64>() / n,
        }
    }
}

/// Sweep output. Everything but `timing` is a deterministic function of
/// the config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest<R, C> {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub config: C,
    pub field: String,
    pub seed: u64,
    pub instances: usize,
    pub results: Vec<R>,
    pub mismatches: Vec<Mismatch>,
    pub timing: Timing,
}

fn manifest<R, C>(config_hash: String, config: C, field: String, seed: u64, results: Vec<R>, mismatches: Vec<Mismatch>, timing: Timing) -> RunManifest<R, C> {
    RunManifest {
        tool: "nilrad".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config_hash,
        config,
        field,
        seed,
        instances: results.len(),
        results,
        mismatches,
        timing,
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building worker pool")
}

enum Task {
    Canonical(Shape),
    General(Shape, Constraint, u64),
}

fn run_task(task: &Task, cfg: &SweepConfig) -> Result<InstanceResult> {
    let q = Field::Rational;
    match task {
        Task::Canonical(shape) => {
            let c = BlockSeq::canonical(shape, q);
            let report = generate_nilradical(&c)?;
            let table = rank_table_of(&report)?;
            let free = free_profile(&report, c.is_phi_invariant());
            let predicted_degree = theory::predict_degree_canonical(shape).predicted_degree;
            let predicted_r1k = theory::predict_r1k(shape);
            let mut mismatches = Vec::new();
            if report.degree != predicted_degree {
                mismatches.push(format!("degree {} != predicted {predicted_degree}", report.degree));
            }
            if table.r1k() != predicted_r1k {
                mismatches.push(format!("r_1k {} != predicted {predicted_r1k}", table.r1k()));
            }
            for ((i, j), r) in table.entries() {
                if (j == i + 1 && r != 1) || r > 2 {
                    mismatches.push(format!("r_({i},{j}) = {r}"));
                }
            }
            if !free.agrees() {
                mismatches.push(format!("free verdict {:?} != predicted {:?}", free.verdict, free.predicted_verdict()));
            }
            Ok(InstanceResult {
                shape: shape.dims().to_vec(),
                check: CheckKind::Canonical,
                constraint: None,
                sample: None,
                dim: report.dim(),
                degree: report.degree,
                predicted_degree,
                r1k: Some(table.r1k()),
                predicted_r1k: Some(predicted_r1k),
                free: Some(free.verdict),
                predicted_free: Some(free.predicted_verdict()),
                mismatches,
            })
        }
        Task::General(shape, constraint, index) => {
            let sampler = SeqSampler::new(cfg.seed, cfg.entry_bound, *constraint, q)?;
            let seq = sampler.sample(shape, *index)?;
            let report = generate_nilradical(&seq)?;
            let predicted_degree = theory::predict_degree(&seq)?.predicted_degree;
            let mut mismatches = Vec::new();
            if report.degree != predicted_degree {
                mismatches.push(format!("degree {} != predicted {predicted_degree}", report.degree));
            }
            Ok(InstanceResult {
                shape: shape.dims().to_vec(),
                check: CheckKind::General,
                constraint: Some(*constraint),
                sample: Some(*index),
                dim: report.dim(),
                degree: report.degree,
                predicted_degree,
                r1k: None,
                predicted_r1k: None,
                free: None,
                predicted_free: None,
                mismatches,
            })
        }
    }
}

pub type VerifyManifest = RunManifest<InstanceResult, SweepConfig>;

pub fn verify(cfg: &SweepConfig) -> Result<VerifyManifest> {
    cfg.validate()?;
    let start = Instant::now();
    let [k_lo, k_hi] = cfg.k_range;
    let shapes = enumerate_shapes(k_lo, k_hi, cfg.d_max, cfg.dim_cap);
    let mut tasks = Vec::new();
    if !cfg.skip_canonical {
        tasks.extend(shapes.iter().cloned().map(Task::Canonical));
    }
    for shape in shapes.iter().filter(|s| s.is_odd_symmetric() && cfg.general_k.contains(&s.k())) {
        for &constraint in &cfg.constraints {
            for i in 0..cfg.samples_per_shape {
                tasks.push(Task::General(shape.clone(), constraint, i));
            }
        }
    }
    let timed: Vec<(InstanceResult, f64)> = pool(cfg.threads)?.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let t0 = Instant::now();
                run_task(t, cfg).map(|r| (r, t0.elapsed().as_secs_f64()))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let secs: Vec<f64> = timed.iter().map(|(_, s)| *s).collect();
    let mut results: Vec<InstanceResult> = timed.into_iter().map(|(r, _)| r).collect();
    results.sort_by_key(InstanceResult::sort_key);
    let mismatches = results
        .iter()
        .flat_map(|r| {
            r.mismatches.iter().map(|m| Mismatch {
                shape: r.shape.clone(),
                check: r.check.clone(),
                sample: r.sample,
                detail: m.clone(),
            })
        })
        .collect();
    Ok(manifest(cfg.hash(), cfg.canonical(), "Q".into(), cfg.seed, results, mismatches, Timing::from(start, &secs)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum CharpPattern {
    /// Shapes `(p, ..., p)`.
    ConstantP,
    /// Every shape within the bounds.
    Grid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharpConfig {
    pub primes: Vec<u64>,
    pub k_range: [usize; 2],
    pub d_max: usize,
    pub dim_cap: usize,
    pub pattern: CharpPattern,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharpResult {
    pub p: u64,
    pub shape: Vec<usize>,
    pub dim: usize,
    pub independent_generators: usize,
    pub degree: usize,
    /// Degree of the same shape in characteristic 0.
    pub char0_degree: usize,
    /// Degree below `k - 1` on a shape that is not a characteristic-0 exception.
    pub flagged: bool,
}

pub type CharpManifest = RunManifest<CharpResult, CharpConfig>;

pub fn charp(cfg: &CharpConfig) -> Result<CharpManifest> {
    let start = Instant::now();
    let [k_lo, k_hi] = cfg.k_range;
    if k_lo < 2 || k_hi < k_lo {
        bail!("k range must satisfy 2 <= min <= max, got {k_lo}..{k_hi}");
    }
    if cfg.primes.is_empty() {
        bail!("no primes given");
    }
    let mut tasks = Vec::new();
    for &p in &cfg.primes {
        let field = Field::prime(p)?;
        let shapes = match cfg.pattern {
            CharpPattern::ConstantP => (k_lo..=k_hi)
                .map(|k| Shape::new(vec![p as usize; k]))
                .collect::<nilrad::Result<Vec<_>>>()?,
            CharpPattern::Grid => enumerate_shapes(k_lo, k_hi, cfg.d_max, cfg.dim_cap),
        };
        tasks.extend(shapes.into_iter().map(|s| (field, s)));
    }
    let timed: Vec<(CharpResult, f64)> = pool(cfg.threads)?.install(|| {
        tasks
            .par_iter()
            .map(|(field, shape)| {
                let t0 = Instant::now();
                let report = generate_nilradical(&BlockSeq::canonical(shape, *field))?;
                let exception = shape.is_all_ones() || shape.is_odd_symmetric_unit_ends();
                let r = CharpResult {
                    p: field.characteristic(),
                    shape: shape.dims().to_vec(),
                    dim: report.dim(),
                    independent_generators: report.independent_generators,
                    degree: report.degree,
                    char0_degree: theory::predict_degree_canonical(shape).predicted_degree,
                    flagged: !exception && report.degree < shape.k() - 1,
                };
                Ok((r, t0.elapsed().as_secs_f64()))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let secs: Vec<f64> = timed.iter().map(|(_, s)| *s).collect();
    let mut results: Vec<CharpResult> = timed.into_iter().map(|(r, _)| r).collect();
    results.sort_by_key(|r| (r.p, r.shape.len(), r.shape.clone()));
    let stored = CharpConfig { threads: 0, ..cfg.clone() };
    let hash = hex::encode(Sha256::digest(serde_json::to_vec(&stored)?));
    let field = cfg.primes.iter().map(|p| format!("Fp:{p}")).collect::<Vec<_>>().join(",");
    Ok(manifest(hash, stored, field, 0, results, Vec::new(), Timing::from(start, &secs)))
}
