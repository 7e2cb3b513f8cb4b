//! Zero-noise extrapolation: gate folding to amplify noise, then linear or
//! Richardson extrapolation back to the zero-noise limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{GridSpec, Landscape, LandscapeMeta};
use crate::sim::{self, circuit_expectation, derive_seed, Ansatz, Circuit, NoiseModel, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extrapolation {
    /// Least-squares line, intercept at scale 0.
    Linear,
    /// Interpolating polynomial through all points, evaluated at 0.
    Richardson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneConfig {
    pub scale_factors: Vec<f64>,
    pub extrapolation: Extrapolation,
}

impl ZneConfig {
    pub fn new(scale_factors: Vec<f64>, extrapolation: Extrapolation) -> Result<Self> {
        let cfg = ZneConfig {
            scale_factors,
            extrapolation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Richardson over scales {1, 2, 3}.
    pub fn richardson() -> Self {
        ZneConfig {
            scale_factors: vec![1.0, 2.0, 3.0],
            extrapolation: Extrapolation::Richardson,
        }
    }

    /// Linear over scales {1, 3}.
    pub fn linear() -> Self {
        ZneConfig {
            scale_factors: vec![1.0, 3.0],
            extrapolation: Extrapolation::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.scale_factors;
        if s.len() < 2 {
            return Err(Error::invalid("ZNE needs at least two scale factors"));
        }
        if s.iter().any(|f| !(f.is_finite() && *f >= 1.0)) {
            return Err(Error::invalid(format!("scale factors must be finite and >= 1, got {s:?}")));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("scale factors must be strictly increasing, got {s:?}")));
        }
        Ok(())
    }

    /// Circuit executions per landscape point.
    pub fn queries_per_point(&self) -> usize {
        self.scale_factors.len()
    }
}

/// Amplifies noise exposure by replacing gates `U` with `U (U† U)^k`.
///
/// The number of folds is `round((factor - 1) * n / 2)` for an `n`-gate
/// circuit. Folds are spread evenly over all gates and any remainder goes to
/// the gates at the start of the circuit, so odd integer factors fold every
/// gate equally and other factors fold a leading prefix once more.
pub fn fold_scale(circuit: &Circuit, factor: f64) -> Result<Circuit> {
    if !(factor.is_finite() && factor >= 1.0) {
        return Err(Error::invalid(format!("fold factor must be >= 1, got {factor}")));
    }
    let n = circuit.len();
    if n == 0 {
        return Ok(circuit.clone());
    }
    let folds = ((factor - 1.0) * n as f64 / 2.0).round() as usize;
    let (base, extra) = (folds / n, folds % n);
    let mut out = Circuit::new(circuit.n_qubits);
    out.gates.reserve(n + 2 * folds);
    for (g, gate) in circuit.gates.iter().enumerate() {
        out.push(*gate);
        let k = base + usize::from(g < extra);
        for _ in 0..k {
            out.push(gate.inverse());
            out.push(*gate);
        }
    }
    Ok(out)
}

/// Extrapolates `(scale, value)` pairs to scale 0.
pub fn extrapolate(points: &[(f64, f64)], method: Extrapolation) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("extrapolation needs at least two points"));
    }
    if points.iter().any(|(s, v)| !s.is_finite() || !v.is_finite()) {
        return Err(Error::invalid("extrapolation points must be finite"));
    }
    match method {
        Extrapolation::Linear => {
            let n = points.len() as f64;
            let mean_s = points.iter().map(|p| p.0).sum::<f64>() / n;
            let mean_v = points.iter().map(|p| p.1).sum::<f64>() / n;
            let sxx: f64 = points.iter().map(|p| (p.0 - mean_s).powi(2)).sum();
            if sxx == 0.0 {
                return Err(Error::invalid("linear extrapolation needs at least two distinct scales"));
            }
            let sxy: f64 = points.iter().map(|p| (p.0 - mean_s) * (p.1 - mean_v)).sum();
            Ok(mean_v - (sxy / sxx) * mean_s)
        }
        Extrapolation::Richardson => {
            for (i, a) in points.iter().enumerate() {
                if points[i + 1..].iter().any(|b| b.0 == a.0) {
                    return Err(Error::invalid(format!("duplicate scale {} in Richardson extrapolation", a.0)));
                }
            }
            // Lagrange basis evaluated at 0.
            Ok(points
                .iter()
                .enumerate()
                .map(|(i, &(si, vi))| {
                    let w: f64 = points
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &(sj, _))| sj / (sj - si))
                        .product();
                    w * vi
                })
                .sum())
        }
    }
}

/// Result of one zero-noise-extrapolated evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneEstimate {
    pub value: f64,
    /// Measured `(scale, value)` pairs.
    pub points: Vec<(f64, f64)>,
    /// Circuit executions spent.
    pub queries: usize,
}

/// Runs ZNE against any backend mapping a noise scale factor to a value.
pub fn zne_with<F>(zne: &ZneConfig, mut backend: F) -> Result<ZneEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    zne.validate()?;
    let points = zne
        .scale_factors
        .iter()
        .map(|&s| backend(s).map(|v| (s, v)))
        .collect::<Result<Vec<_>>>()?;
    let value = extrapolate(&points, zne.extrapolation)?;
    Ok(ZneEstimate {
        value,
        queries: points.len(),
        points,
    })
}

fn zne_circuit(circuit: &Circuit, cost: &[f64], noise: &NoiseModel, zne: &ZneConfig, seed: u64) -> Result<ZneEstimate> {
    zne_with(zne, |scale| {
        let folded = fold_scale(circuit, scale)?;
        // Seeding by scale value lets configurations that share a scale share its samples.
        circuit_expectation(&folded, cost, noise, derive_seed(seed, scale.to_bits())).map(|e| e.value)
    })
}

/// Zero-noise-extrapolated expectation at one parameter point.
pub fn zne_expectation(
    problem: &ProblemInstance,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
    zne: &ZneConfig,
    seed: u64,
) -> Result<ZneEstimate> {
    let circuit = ansatz.build(problem, params)?;
    zne_circuit(&circuit, &problem.cost_diagonal(), noise, zne, seed)
}

/// Landscape of ZNE-mitigated expectations over `spec`.
pub fn mitigated_landscape(
    problem: &ProblemInstance,
    ansatz: &Ansatz,
    spec: &GridSpec,
    noise: &NoiseModel,
    zne: &ZneConfig,
    seed: u64,
) -> Result<Landscape> {
    zne.validate()?;
    noise.validate()?;
    let k = ansatz.parameter_count(problem.n_qubits);
    if spec.ndim() != k {
        return Err(Error::invalid(format!("grid has {} dimensions, ansatz has {k} parameters", spec.ndim())));
    }
    let cost = problem.cost_diagonal();
    let values = sim::evaluate_grid(spec, |i, point| {
        let circuit = ansatz.build(problem, point)?;
        zne_circuit(&circuit, &cost, noise, zne, derive_seed(seed, i as u64)).map(|e| e.value)
    })?;
    let meta = LandscapeMeta {
        problem: Some(problem.clone()),
        ansatz: Some(*ansatz),
        noise: Some(*noise),
        mitigation: Some(zne.clone()),
        seed: Some(seed),
        ..Default::default()
    };
    Landscape::new(spec.clone(), values, meta)
}
