//! Statevector simulation of QAOA and Two-local ansatzes with optional
//! depolarizing noise, and grid-search landscape generation.

mod circuit;
mod noise;
mod problem;
mod statevector;

use rayon::prelude::*;

pub use circuit::{Ansatz, Circuit, Gate};
pub use noise::{circuit_expectation, Estimate, NoiseModel};
pub use problem::{
    random_regular_graph, random_sk, random_sk_with, ProblemInstance, ProblemKind, SkCouplings, MAX_QUBITS,
    MIN_QUBITS,
};
pub use statevector::{Pauli, Statevector};

use crate::error::{Error, Result};
use crate::landscape::{GridSpec, Landscape, LandscapeMeta};

/// Mixes a base seed with a stream id (splitmix64 finalizer).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Expected cut value `<C>` of the ansatz state at `params`.
///
/// Ideal with `shots = 0` is exact; noisy runs average Monte Carlo Pauli
/// trajectories and are deterministic per `seed`.
pub fn expectation(
    problem: &ProblemInstance,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
    seed: u64,
) -> Result<f64> {
    let cost = problem.cost_diagonal();
    expectation_with_cost(problem, ansatz, params, noise, seed, &cost).map(|e| e.value)
}

pub(crate) fn expectation_with_cost(
    problem: &ProblemInstance,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
    seed: u64,
    cost: &[f64],
) -> Result<Estimate> {
    let circuit = ansatz.build(problem, params)?;
    circuit_expectation(&circuit, cost, noise, seed)
}

fn check_grid(problem: &ProblemInstance, ansatz: &Ansatz, spec: &GridSpec) -> Result<()> {
    ansatz.validate()?;
    let k = ansatz.parameter_count(problem.n_qubits);
    if spec.ndim() != k {
        return Err(Error::invalid(format!(
            "grid has {} dimensions but {} has {k} parameters",
            spec.ndim(),
            ansatz.name()
        )));
    }
    Ok(())
}

/// Evaluates `f(index, point)` over every grid point, in parallel, keeping
/// column-major order.
pub(crate) fn evaluate_grid<F>(spec: &GridSpec, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize, &[f64]) -> Result<f64> + Sync,
{
    (0..spec.len())
        .into_par_iter()
        .map(|i| f(i, &spec.point(i)))
        .collect()
}

/// Grid search: the expectation at every point of `spec`.
///
/// Point `i` uses seed `derive_seed(seed, i)`, so the result does not depend
/// on evaluation order or thread count.
pub fn generate_landscape(
    problem: &ProblemInstance,
    ansatz: &Ansatz,
    spec: &GridSpec,
    noise: &NoiseModel,
    seed: u64,
) -> Result<Landscape> {
    check_grid(problem, ansatz, spec)?;
    noise.validate()?;
    let cost = problem.cost_diagonal();
    let values = evaluate_grid(spec, |i, point| {
        expectation_with_cost(problem, ansatz, point, noise, derive_seed(seed, i as u64), &cost).map(|e| e.value)
    })?;
    let meta = LandscapeMeta {
        problem: Some(problem.clone()),
        ansatz: Some(*ansatz),
        noise: Some(*noise),
        seed: Some(seed),
        ..Default::default()
    };
    Landscape::new(spec.clone(), values, meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_angles_cut_half_the_weight() {
        let g = random_regular_graph(6, 3, 2).unwrap();
        let v = expectation(&g, &Ansatz::Qaoa { p: 1 }, &[0.0, 0.0], &NoiseModel::ideal(), 0).unwrap();
        assert!((v - g.total_weight() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_count_mismatch() {
        let g = random_regular_graph(4, 3, 0).unwrap();
        assert!(expectation(&g, &Ansatz::Qaoa { p: 1 }, &[0.1, 0.2, 0.3], &NoiseModel::ideal(), 0).is_err());
    }

    #[test]
    fn grid_dimension_must_match_parameters() {
        let g = random_regular_graph(4, 3, 0).unwrap();
        assert!(generate_landscape(&g, &Ansatz::Qaoa { p: 2 }, &GridSpec::qaoa_p1(), &NoiseModel::ideal(), 0).is_err());
    }

    #[test]
    fn derive_seed_separates_streams() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(5, 9), derive_seed(5, 9));
    }
}
