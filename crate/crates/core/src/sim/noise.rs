//! Depolarizing noise by stochastic Pauli insertion (quantum trajectories).
//!
//! Each trajectory draws, for every gate, whether its depolarizing channel
//! fires and which non-identity Pauli it applies. Trajectories that draw no
//! fault reproduce the ideal output, so only faulty ones are simulated, and
//! those restart from a cached ideal state just before their first fault.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::statevector::{Pauli, Statevector};
use crate::error::{Error, Result};

/// Simulated device: depolarizing probability per 1q and 2q gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1q: f64,
    pub p2q: f64,
    pub trajectories: usize,
    /// 0 means exact expectation of the output distribution.
    pub shots: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::ideal()
    }
}

impl NoiseModel {
    pub const DEFAULT_TRAJECTORIES: usize = 200;

    pub fn ideal() -> Self {
        NoiseModel {
            p1q: 0.0,
            p2q: 0.0,
            trajectories: Self::DEFAULT_TRAJECTORIES,
            shots: 0,
        }
    }

    pub fn depolarizing(p1q: f64, p2q: f64) -> Self {
        NoiseModel {
            p1q,
            p2q,
            ..Self::ideal()
        }
    }

    pub fn with_trajectories(mut self, trajectories: usize) -> Self {
        self.trajectories = trajectories;
        self
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1q == 0.0 && self.p2q == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1q", self.p1q), ("p2q", self.p2q)] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::invalid(format!("{name} = {p} outside [0, 1)")));
            }
        }
        if !self.is_noiseless() && self.trajectories == 0 {
            return Err(Error::invalid("noisy simulation needs at least one trajectory"));
        }
        Ok(())
    }
}

/// Mean estimate and its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Clone, Copy)]
struct Fault {
    gate: usize,
    first: Pauli,
    second: Pauli,
}

/// Keep at most this many cached amplitudes per circuit evaluation.
const CHECKPOINT_BUDGET: usize = 1 << 22;

fn sample_faults(circuit: &Circuit, noise: &NoiseModel, rng: &mut ChaCha8Rng, out: &mut Vec<Fault>) {
    out.clear();
    for (g, gate) in circuit.gates.iter().enumerate() {
        if gate.is_two_qubit() {
            if noise.p2q > 0.0 && rng.gen::<f64>() < noise.p2q {
                let k = rng.gen_range(1..16);
                out.push(Fault {
                    gate: g,
                    first: Pauli::ALL[k % 4],
                    second: Pauli::ALL[k / 4],
                });
            }
        } else if noise.p1q > 0.0 && rng.gen::<f64>() < noise.p1q {
            out.push(Fault {
                gate: g,
                first: Pauli::ALL[rng.gen_range(1..4)],
                second: Pauli::I,
            });
        }
    }
}

fn sample_shots(probs: &[f64], cost: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> f64 {
    let dist = WeightedIndex::new(probs).expect("output distribution has positive mass");
    let total: f64 = (0..shots).map(|_| cost[dist.sample(rng)]).sum();
    total / shots as f64
}

/// Expected value of the diagonal observable `cost` on the circuit output.
pub fn circuit_expectation(circuit: &Circuit, cost: &[f64], noise: &NoiseModel, seed: u64) -> Result<Estimate> {
    noise.validate()?;
    if cost.len() != 1 << circuit.n_qubits {
        return Err(Error::invalid("cost diagonal does not match circuit width"));
    }
    let dim = 1usize << circuit.n_qubits;
    let gates = &circuit.gates;
    let stride = (gates.len() * dim).div_ceil(CHECKPOINT_BUDGET).max(1);
    let noisy = !noise.is_noiseless();

    let mut state = Statevector::zero(circuit.n_qubits);
    let mut checkpoints = Vec::new();
    for (g, gate) in gates.iter().enumerate() {
        if noisy && g % stride == 0 {
            checkpoints.push(state.clone());
        }
        state.apply(gate);
    }
    let ideal_value = state.diagonal_expectation(cost);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    if !noisy {
        let value = if noise.shots > 0 {
            sample_shots(&state.probabilities(), cost, noise.shots, &mut rng)
        } else {
            ideal_value
        };
        return Ok(Estimate { value, std_error: 0.0 });
    }

    let t = noise.trajectories;
    let ideal_probs = state.probabilities();
    let mut mixed_probs = if noise.shots > 0 { vec![0.0; dim] } else { Vec::new() };
    let mut faults = Vec::new();
    let mut work = Statevector::zero(circuit.n_qubits);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut clean = 0usize;

    for _ in 0..t {
        sample_faults(circuit, noise, &mut rng, &mut faults);
        if faults.is_empty() {
            clean += 1;
            continue;
        }
        let start = (faults[0].gate / stride) * stride;
        work.copy_from(&checkpoints[start / stride]);
        let mut next = 0;
        for (g, gate) in gates.iter().enumerate().skip(start) {
            work.apply(gate);
            if next < faults.len() && faults[next].gate == g {
                let f = faults[next];
                let (a, b) = gate.qubits();
                work.apply_pauli(a, f.first);
                if let Some(b) = b {
                    work.apply_pauli(b, f.second);
                }
                next += 1;
            }
        }
        let v = work.diagonal_expectation(cost);
        sum += v;
        sum_sq += v * v;
        if noise.shots > 0 {
            for (m, a) in mixed_probs.iter_mut().zip(work.amplitudes()) {
                *m += a.norm_sqr();
            }
        }
    }

    sum += clean as f64 * ideal_value;
    sum_sq += clean as f64 * ideal_value * ideal_value;
    let mean = sum / t as f64;
    let var = if t > 1 {
        ((sum_sq - t as f64 * mean * mean) / (t - 1) as f64).max(0.0)
    } else {
        0.0
    };
    let std_error = (var / t as f64).sqrt();

    let value = if noise.shots > 0 {
        for (m, p) in mixed_probs.iter_mut().zip(&ideal_probs) {
            *m = (*m + clean as f64 * p) / t as f64;
        }
        sample_shots(&mixed_probs, cost, noise.shots, &mut rng)
    } else {
        mean
    };
    Ok(Estimate { value, std_error })
}
