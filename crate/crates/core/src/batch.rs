//! Seeded corpora run through one operation each, with per-instance
//! verdicts and aggregate pass counts.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{separate, verify_separation};
use crate::dense::{verify_sparse_decomposition, VerifyOptions};
use crate::error::{Error, Result};
use crate::generate::{generate, Generated, GeneratorSpec};
use crate::lks::classify_ls;
use crate::rational::{serde_rational, Rational};
use crate::structure::{rough_structure, separation_input, Dichotomy, StructureParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchOp {
    /// The generator's own audit.
    Audit,
    /// Sparse-decomposition verifier with prepartition [L, S].
    Decomposition,
    /// The separation step on the pipeline's lifted inputs.
    Separate,
    /// The full rough-structure pipeline.
    Structure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchJob {
    /// Instance i uses seed `generator.seed + i`.
    pub generator: GeneratorSpec,
    pub op: BatchOp,
    pub count: usize,
    /// Separation loss budget; defaults to the decomposition's epsilon.
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BatchConfig {
    pub jobs: Vec<BatchJob>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceVerdict {
    pub job: usize,
    /// Replay seed of the generator.
    pub seed: u64,
    pub passed: bool,
    pub checks: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JobSummary {
    pub job: usize,
    pub op: BatchOp,
    pub count: usize,
    pub passed: usize,
    pub errors: usize,
    /// Per-check pass counts.
    pub check_passes: BTreeMap<String, usize>,
    pub failing_seeds: Vec<u64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BatchReport {
    pub jobs: Vec<JobSummary>,
    pub instances: Vec<InstanceVerdict>,
    pub total: usize,
    pub passed: usize,
}

fn with_nabla(generated: &Generated) -> Result<&crate::dense::SparseDecomposition> {
    generated.nabla.as_ref().ok_or_else(|| Error::Input("the generator emits no decomposition".into()))
}

fn checks_for(job: &BatchJob, generated: &Generated) -> Result<BTreeMap<String, bool>> {
    let g = &generated.graph;
    let mut checks = BTreeMap::new();
    match job.op {
        BatchOp::Audit => {
            checks.insert("audit".into(), generated.audit.passed());
        }
        BatchOp::Decomposition => {
            let nabla = with_nabla(generated)?;
            let (large, small) = classify_ls(g, nabla.params.k, &job.generator.eta)?;
            let report = verify_sparse_decomposition(g, &[large, small], nabla, &VerifyOptions::default())?;
            for c in &report.checks {
                checks.insert(c.property.clone(), c.ok);
            }
        }
        BatchOp::Separate => {
            let nabla = with_nabla(generated)?;
            let eps = job.epsilon.clone().unwrap_or_else(|| nabla.params.epsilon.clone());
            let params = StructureParams::new(job.generator.eta.clone(), eps.clone());
            let input = separation_input(g, nabla, &params)?;
            let result =
                separate(&input.spot_graph, &nabla.spots, &input.lifted_m, &input.target, &input.y, &input.params)?;
            let recount = verify_separation(
                &input.spot_graph,
                &nabla.spots,
                &input.lifted_m,
                &input.target,
                &input.y,
                &result,
                &input.params.rho,
                &eps,
                nabla.params.k,
            );
            checks.insert("i".into(), recount.i);
            checks.insert("ii".into(), recount.ii);
            checks.insert("iii".into(), recount.iii);
            let within =
                result.round_bound.parse::<num_bigint::BigInt>().is_ok_and(|b| b >= result.rounds.len().into());
            checks.insert("rounds".into(), within);
        }
        BatchOp::Structure => {
            let nabla = with_nabla(generated)?;
            let eps = job.epsilon.clone().unwrap_or_else(|| nabla.params.epsilon.clone());
            let out = rough_structure(g, nabla, &StructureParams::new(job.generator.eta.clone(), eps))?;
            for a in &out.report.assertions {
                checks.insert(a.name.clone(), a.ok);
            }
            checks.insert("accepted".into(), out.accepted);
            checks.insert("neither_rejected".into(), out.dichotomy != Dichotomy::Neither || !out.accepted);
            if let Some(h) = &out.hypotheses {
                checks.insert("compliant".into(), h.compliant);
            }
        }
    }
    Ok(checks)
}

/// Runs instance `index` of `job`; the verdict depends only on the job
/// and the index.
pub fn run_instance(job_index: usize, job: &BatchJob, index: usize) -> InstanceVerdict {
    let mut spec = job.generator.clone();
    spec.seed = spec.seed.wrapping_add(index as u64);
    let outcome = generate(&spec).and_then(|generated| checks_for(job, &generated));
    let seed = spec.seed;
    match outcome {
        Ok(checks) => {
            let passed = match job.op {
                BatchOp::Structure => checks.get("accepted").copied().unwrap_or(false),
                _ => checks.values().all(|&ok| ok),
            };
            InstanceVerdict { job: job_index, seed, passed, checks, error: None }
        }
        Err(e) => {
            InstanceVerdict { job: job_index, seed, passed: false, checks: BTreeMap::new(), error: Some(e.to_string()) }
        }
    }
}

/// Runs every job, instances in parallel, results in input order.
pub fn run_batch(config: &BatchConfig) -> BatchReport {
    let mut report = BatchReport::default();
    for (j, job) in config.jobs.iter().enumerate() {
        let verdicts: Vec<InstanceVerdict> = (0..job.count).into_par_iter().map(|i| run_instance(j, job, i)).collect();
        let mut check_passes = BTreeMap::new();
        for v in &verdicts {
            for (name, &ok) in &v.checks {
                *check_passes.entry(name.clone()).or_insert(0) += usize::from(ok);
            }
        }
        report.jobs.push(JobSummary {
            job: j,
            op: job.op,
            count: job.count,
            passed: verdicts.iter().filter(|v| v.passed).count(),
            errors: verdicts.iter().filter(|v| v.error.is_some()).count(),
            check_passes,
            failing_seeds: verdicts.iter().filter(|v| !v.passed).map(|v| v.seed).collect(),
        });
        report.instances.extend(verdicts);
    }
    report.total = report.instances.len();
    report.passed = report.instances.iter().filter(|v| v.passed).count();
    report
}
