use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{adam, nelder_mead, AdamConfig, InterpolatedObjective, Interpolator, NelderMeadConfig, Objective, OptimizerRun};
use crate::cs::{reconstruct, SolverConfig};
use crate::error::{Error, Result};
use crate::landscape::{sample_indices, GridSpec, Landscape, LandscapeMeta};
use crate::sim::{derive_seed, expectation_with_cost, Ansatz, NoiseModel, ProblemInstance};

/// Live-circuit objective: minimizes `-<C>`, counting one device query per
/// evaluation. Noisy evaluation `k` is seeded with `derive_seed(seed, k)`.
pub struct CircuitObjective<'a> {
    problem: &'a ProblemInstance,
    ansatz: Ansatz,
    noise: NoiseModel,
    seed: u64,
    cost: Vec<f64>,
    queries: usize,
}

impl<'a> CircuitObjective<'a> {
    pub fn new(problem: &'a ProblemInstance, ansatz: Ansatz, noise: NoiseModel, seed: u64) -> Result<Self> {
        ansatz.validate()?;
        noise.validate()?;
        Ok(CircuitObjective {
            problem,
            ansatz,
            noise,
            seed,
            cost: problem.cost_diagonal(),
            queries: 0,
        })
    }
}

impl Objective for CircuitObjective<'_> {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        let seed = derive_seed(self.seed, self.queries as u64);
        self.queries += 1;
        let e = expectation_with_cost(self.problem, &self.ansatz, x, &self.noise, seed, &self.cost)?;
        Ok(-e.value)
    }

    fn queries(&self) -> usize {
        self.queries
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OptimizerKind {
    Adam(AdamConfig),
    NelderMead(NelderMeadConfig),
}

impl OptimizerKind {
    pub fn run<O: Objective + ?Sized>(&self, objective: &mut O, init: &[f64]) -> Result<OptimizerRun> {
        match self {
            OptimizerKind::Adam(cfg) => adam(objective, init, cfg),
            OptimizerKind::NelderMead(cfg) => nelder_mead(objective, init, cfg),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OptimizerKind::Adam(_) => "adam",
            OptimizerKind::NelderMead(_) => "nelder-mead",
        }
    }
}

/// Uniform random point inside the grid rectangle.
pub fn random_point(spec: &GridSpec, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    spec.dims().iter().map(|d| rng.gen_range(d.lo..=d.hi)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscarInit {
    pub init_point: Vec<f64>,
    /// Circuit executions spent sampling the landscape.
    pub recon_queries: usize,
    /// Optimization on the interpolated reconstruction (no device queries).
    pub interp_run: OptimizerRun,
    /// Live-circuit optimization started from `init_point`.
    pub live_run: OptimizerRun,
    pub reconstruction: Landscape,
}

impl OscarInit {
    pub fn opt_queries(&self) -> usize {
        self.live_run.query_count
    }

    pub fn total_queries(&self) -> usize {
        self.recon_queries + self.live_run.query_count
    }
}

/// Picks an initial point from a reconstructed landscape, then optimizes
/// the live circuit from it.
///
/// Samples `sampling_fraction` of `spec`, reconstructs, and runs `optimizer`
/// on the spline of the reconstruction starting at its best grid node. The
/// endpoint of that run seeds the live optimization.
#[allow(clippy::too_many_arguments)]
pub fn oscar_init(
    problem: &ProblemInstance,
    ansatz: &Ansatz,
    spec: &GridSpec,
    noise: &NoiseModel,
    sampling_fraction: f64,
    optimizer: &OptimizerKind,
    solver: &SolverConfig,
    seed: u64,
) -> Result<OscarInit> {
    if spec.ndim() != 2 {
        return Err(Error::invalid("initialization needs a 2-D (p = 1) grid"));
    }
    let indices = sample_indices(spec.len(), sampling_fraction, derive_seed(seed, 0))?;
    let cost = problem.cost_diagonal();
    let noise_seed = derive_seed(seed, 1);
    let values = indices
        .iter()
        .map(|&i| {
            expectation_with_cost(problem, ansatz, &spec.point(i), noise, derive_seed(noise_seed, i as u64), &cost)
                .map(|e| e.value)
        })
        .collect::<Result<Vec<_>>>()?;
    let meas = crate::cs::MeasurementSet::new(indices, values, spec.shape())?;
    let rec = reconstruct(&meas, solver)?;
    let meta = LandscapeMeta {
        problem: Some(problem.clone()),
        ansatz: Some(*ansatz),
        noise: Some(*noise),
        seed: Some(seed),
        ..Default::default()
    };
    let reconstruction = Landscape::from_reconstruction(spec.clone(), &rec, meas.len(), 0.0, meta)?;

    let interp = Interpolator::new(&reconstruction)?;
    let start = spec.point(reconstruction.argmax().0);
    let interp_run = optimizer.run(&mut InterpolatedObjective::maximize(&interp), &start)?;
    let init_point = interp_run.endpoint.clone();

    let mut live = CircuitObjective::new(problem, *ansatz, *noise, derive_seed(seed, 2))?;
    let live_run = optimizer.run(&mut live, &init_point)?;
    Ok(OscarInit {
        init_point,
        recon_queries: meas.len(),
        interp_run,
        live_run,
        reconstruction,
    })
}
