//! Multi-worker sampling on a virtual clock: simulated per-job latency,
//! soft timeouts, and eager reconstruction from whatever finished in time.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cs::{reconstruct, MeasurementSet, SolverConfig};
use crate::error::{Error, Result};
use crate::landscape::{GridSpec, Landscape, LandscapeMeta};
use crate::sim::derive_seed;

/// Lognormal tail added on top of the base latency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LognormalTail {
    pub mu: f64,
    pub sigma: f64,
}

/// Job latency `base + LogNormal(mu, sigma)`, drawn per job index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyModel {
    pub base: f64,
    pub tail: Option<LognormalTail>,
    pub seed: u64,
}

impl LatencyModel {
    pub fn constant(base: f64) -> Self {
        LatencyModel { base, tail: None, seed: 0 }
    }

    pub fn lognormal(base: f64, mu: f64, sigma: f64, seed: u64) -> Self {
        LatencyModel {
            base,
            tail: Some(LognormalTail { mu, sigma }),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base >= 0.0) || !self.base.is_finite() {
            return Err(Error::invalid(format!("base latency {} must be finite and >= 0", self.base)));
        }
        if let Some(t) = self.tail {
            if !t.mu.is_finite() || !(t.sigma >= 0.0) || !t.sigma.is_finite() {
                return Err(Error::invalid("lognormal tail needs finite mu and sigma >= 0"));
            }
        }
        Ok(())
    }

    /// Latency of the job evaluating grid index `index`.
    pub fn latency(&self, index: usize) -> f64 {
        match self.tail {
            None => self.base,
            Some(t) => {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, index as u64));
                let ln = LogNormal::new(t.mu, t.sigma).expect("validated parameters");
                self.base + ln.sample(&mut rng)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedJob {
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispatchReport {
    pub requested: Vec<usize>,
    pub completed: MeasurementSet,
    pub timed_out_indices: Vec<usize>,
    pub failed: Vec<FailedJob>,
    /// Virtual time at which the last worker went idle.
    pub wall_time: f64,
    pub per_worker_counts: Vec<usize>,
}

impl DispatchReport {
    pub fn omitted_fraction(&self) -> f64 {
        1.0 - self.completed.len() as f64 / self.requested.len() as f64
    }
}

/// Runs `jobs` (grid indices) across `workers` simulated devices.
///
/// Jobs are handed out in order to whichever worker frees up first (lowest
/// id on ties). With a soft timeout, a job whose latency exceeds it is
/// abandoned after `soft_timeout` and reported as timed out. Values come
/// from `evaluator` and never depend on timing; evaluator errors mark the
/// job failed.
pub fn dispatch<F>(
    jobs: &[usize],
    grid_shape: &[usize],
    evaluator: F,
    workers: usize,
    latency: &LatencyModel,
    soft_timeout: Option<f64>,
) -> Result<DispatchReport>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    if workers == 0 {
        return Err(Error::invalid("need at least one worker"));
    }
    if jobs.is_empty() {
        return Err(Error::invalid("no jobs to dispatch"));
    }
    latency.validate()?;
    if let Some(t) = soft_timeout {
        if !(t > 0.0) {
            return Err(Error::invalid(format!("soft timeout {t} must be positive")));
        }
    }
    let n: usize = grid_shape.iter().product();
    let mut sorted = jobs.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.last().is_some_and(|&i| i >= n) {
        return Err(Error::invalid("jobs must be distinct grid indices"));
    }

    let mut free_at = vec![0.0f64; workers];
    let mut per_worker_counts = vec![0usize; workers];
    let mut on_time = Vec::with_capacity(jobs.len());
    let mut timed_out = Vec::new();
    for &job in jobs {
        let w = (0..workers)
            .min_by(|&a, &b| free_at[a].total_cmp(&free_at[b]))
            .expect("workers >= 1");
        let lat = latency.latency(job);
        per_worker_counts[w] += 1;
        match soft_timeout {
            Some(t) if lat > t => {
                free_at[w] += t;
                timed_out.push(job);
            }
            _ => {
                free_at[w] += lat;
                on_time.push(job);
            }
        }
    }
    let wall_time = free_at.iter().copied().fold(0.0, f64::max);

    let results: Vec<(usize, Result<f64>)> = on_time.par_iter().map(|&i| (i, evaluator(i))).collect();
    let mut pairs = Vec::with_capacity(results.len());
    let mut failed = Vec::new();
    for (index, r) in results {
        match r.and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation(format!("non-finite value {v}")))
            }
        }) {
            Ok(v) => pairs.push((index, v)),
            Err(e) => failed.push(FailedJob {
                index,
                error: e.to_string(),
            }),
        }
    }
    pairs.sort_unstable_by_key(|p| p.0);
    timed_out.sort_unstable();
    failed.sort_unstable_by_key(|f| f.index);
    Ok(DispatchReport {
        requested: jobs.to_vec(),
        completed: MeasurementSet::from_pairs(pairs, grid_shape.to_vec())?,
        timed_out_indices: timed_out,
        failed,
        wall_time,
        per_worker_counts,
    })
}

/// Reconstructs from the completed samples only, recording how many of the
/// requested ones were left out.
pub fn eager_reconstruct(report: &DispatchReport, spec: &GridSpec, config: &SolverConfig) -> Result<Landscape> {
    if report.completed.is_empty() {
        return Err(Error::invalid("no completed samples to reconstruct from"));
    }
    if report.completed.grid_shape() != spec.shape().as_slice() {
        return Err(Error::invalid("report grid does not match the landscape grid"));
    }
    let rec = reconstruct(&report.completed, config)?;
    Landscape::from_reconstruction(
        spec.clone(),
        &rec,
        report.completed.len(),
        report.omitted_fraction(),
        LandscapeMeta::default(),
    )
}
