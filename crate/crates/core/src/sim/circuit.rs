use serde::{Deserialize, Serialize};

use super::problem::ProblemInstance;
use crate::error::{Error, Result};

/// Gate set used by the ansatz circuits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    /// Controlled-X (control, target).
    Cx(usize, usize),
}

impl Gate {
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(q),
            Gate::Rx(q, t) => Gate::Rx(q, -t),
            Gate::Ry(q, t) => Gate::Ry(q, -t),
            Gate::Rz(q, t) => Gate::Rz(q, -t),
            Gate::Cx(c, t) => Gate::Cx(c, t),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx(..))
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => (q, None),
            Gate::Cx(c, t) => (c, Some(t)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}

/// Parameterized circuit family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Ansatz {
    /// Depth-`p` QAOA; parameters are `[beta_1..beta_p, gamma_1..gamma_p]`.
    Qaoa { p: usize },
    /// Ry layers with a linear CX chain between them, plus a final Ry layer;
    /// parameters are layer-major, one angle per qubit.
    TwoLocal { layers: usize },
}

impl Ansatz {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Ansatz::Qaoa { p: 0 } => Err(Error::invalid("QAOA depth must be at least 1")),
            Ansatz::TwoLocal { layers: 0 } => Err(Error::invalid("Two-local needs at least 1 layer")),
            _ => Ok(()),
        }
    }

    pub fn parameter_count(&self, n_qubits: usize) -> usize {
        match *self {
            Ansatz::Qaoa { p } => 2 * p,
            Ansatz::TwoLocal { layers } => n_qubits * (layers + 1),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Ansatz::Qaoa { p } => format!("qaoa-p{p}"),
            Ansatz::TwoLocal { layers } => format!("twolocal-l{layers}"),
        }
    }

    /// Circuit for `problem` at parameter vector `params`.
    pub fn build(&self, problem: &ProblemInstance, params: &[f64]) -> Result<Circuit> {
        self.validate()?;
        let n = problem.n_qubits;
        let expected = self.parameter_count(n);
        if params.len() != expected {
            return Err(Error::invalid(format!(
                "{} expects {expected} parameters, got {}",
                self.name(),
                params.len()
            )));
        }
        let mut c = Circuit::new(n);
        match *self {
            Ansatz::Qaoa { p } => {
                let (betas, gammas) = params.split_at(p);
                for q in 0..n {
                    c.push(Gate::H(q));
                }
                for (&beta, &gamma) in betas.iter().zip(gammas) {
                    // exp(-i gamma w (1 - ZZ)/2) is RZZ(-gamma w) up to global phase.
                    for &(i, j, w) in &problem.edges {
                        c.push(Gate::Cx(i, j));
                        c.push(Gate::Rz(j, -gamma * w));
                        c.push(Gate::Cx(i, j));
                    }
                    for q in 0..n {
                        c.push(Gate::Rx(q, 2.0 * beta));
                    }
                }
            }
            Ansatz::TwoLocal { layers } => {
                for layer in 0..=layers {
                    for q in 0..n {
                        c.push(Gate::Ry(q, params[layer * n + q]));
                    }
                    if layer < layers {
                        for q in 0..n - 1 {
                            c.push(Gate::Cx(q, q + 1));
                        }
                    }
                }
            }
        }
        Ok(c)
    }
}
