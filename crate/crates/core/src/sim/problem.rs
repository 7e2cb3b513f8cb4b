use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    MaxCut,
    Sk,
}

/// Coupling distribution for SK instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkCouplings {
    #[default]
    PlusMinusOne,
    Gaussian,
}

/// A weighted graph problem on `n_qubits` spins.
///
/// The cost is `C(z) = sum_(i,j) w_ij (1 - z_i z_j) / 2`, the weight of the
/// cut induced by bitstring `z`, to be maximized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub n_qubits: usize,
    pub kind: ProblemKind,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ProblemInstance {
    pub fn new(n_qubits: usize, kind: ProblemKind, mut edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::invalid(format!(
                "qubit count {n_qubits} outside {MIN_QUBITS}..={MAX_QUBITS}"
            )));
        }
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0, e.2);
            }
        }
        let mut seen = BTreeSet::new();
        for &(i, j, w) in &edges {
            if i == j || j >= n_qubits {
                return Err(Error::invalid(format!("edge ({i}, {j}) invalid for {n_qubits} qubits")));
            }
            if !w.is_finite() {
                return Err(Error::invalid(format!("edge ({i}, {j}) has non-finite weight")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::invalid(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(ProblemInstance {
            n_qubits,
            kind,
            edges,
            seed: None,
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_qubits];
        for &(i, j, _) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// Cost of every computational basis state; bit `q` of the index is qubit `q`.
    pub fn cost_diagonal(&self) -> Vec<f64> {
        (0..1usize << self.n_qubits)
            .map(|z| {
                self.edges
                    .iter()
                    .filter(|&&(i, j, _)| ((z >> i) ^ (z >> j)) & 1 == 1)
                    .map(|e| e.2)
                    .sum()
            })
            .collect()
    }

    /// Short identifier for provenance records.
    pub fn id(&self) -> String {
        let kind = match self.kind {
            ProblemKind::MaxCut => "maxcut",
            ProblemKind::Sk => "sk",
        };
        match self.seed {
            Some(s) => format!("{kind}-n{}-s{s}", self.n_qubits),
            None => format!("{kind}-n{}", self.n_qubits),
        }
    }
}

/// Uniformly random simple `degree`-regular graph with unit weights, by the
/// pairing model with rejection.
pub fn random_regular_graph(n: usize, degree: usize, seed: u64) -> Result<ProblemInstance> {
    if (n * degree) % 2 == 1 {
        return Err(Error::invalid(format!("no {degree}-regular graph on {n} vertices (n*d odd)")));
    }
    if degree >= n {
        return Err(Error::invalid(format!("degree {degree} needs more than {n} vertices")));
    }
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(Error::invalid(format!("qubit count {n} outside {MIN_QUBITS}..={MAX_QUBITS}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    for _ in 0..10_000 {
        stubs.shuffle(&mut rng);
        let mut edges = BTreeSet::new();
        let ok = stubs.chunks_exact(2).all(|p| {
            let (a, b) = (p[0].min(p[1]), p[0].max(p[1]));
            a != b && edges.insert((a, b))
        });
        if ok {
            let edges = edges.into_iter().map(|(a, b)| (a, b, 1.0)).collect();
            let mut inst = ProblemInstance::new(n, ProblemKind::MaxCut, edges)?;
            inst.seed = Some(seed);
            return Ok(inst);
        }
    }
    Err(Error::invalid(format!("failed to sample a {degree}-regular graph on {n} vertices")))
}

/// All-to-all SK instance with ±1 couplings.
pub fn random_sk(n: usize, seed: u64) -> Result<ProblemInstance> {
    random_sk_with(n, seed, SkCouplings::PlusMinusOne)
}

pub fn random_sk_with(n: usize, seed: u64, couplings: SkCouplings) -> Result<ProblemInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let w = match couplings {
                SkCouplings::PlusMinusOne => {
                    if rng.gen_bool(0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                }
                SkCouplings::Gaussian => rng.sample(StandardNormal),
            };
            edges.push((i, j, w));
        }
    }
    let mut inst = ProblemInstance::new(n, ProblemKind::Sk, edges)?;
    inst.seed = Some(seed);
    Ok(inst)
}
