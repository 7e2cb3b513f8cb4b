//! Optimizers over landscapes and live circuits: spline interpolation of a
//! gridded landscape, ADAM with finite-difference gradients, Nelder–Mead,
//! and landscape-based initial-point selection.

mod adam;
mod init;
mod interp;
mod nelder_mead;

use serde::{Deserialize, Serialize};

pub use adam::{adam, AdamConfig};
pub use init::{oscar_init, random_point, CircuitObjective, OptimizerKind, OscarInit};
pub use interp::Interpolator;
pub use nelder_mead::{nelder_mead, nelder_mead_simplex, NelderMeadConfig};

use crate::error::{Error, Result};
use crate::landscape::quantile;

/// Something an optimizer can minimize.
pub trait Objective {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64>;

    /// Device executions spent so far. Zero for objectives that never
    /// touch a quantum device.
    fn queries(&self) -> usize {
        0
    }
}

/// Adapts a closure into an [`Objective`] with no device queries.
pub struct FnObjective<F>(pub F);

impl<F: FnMut(&[f64]) -> f64> Objective for FnObjective<F> {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        Ok((self.0)(x))
    }
}

/// Minimizes the interpolated landscape, or its negation when maximizing.
pub struct InterpolatedObjective<'a> {
    pub interp: &'a Interpolator,
    pub sign: f64,
}

impl<'a> InterpolatedObjective<'a> {
    pub fn minimize(interp: &'a Interpolator) -> Self {
        InterpolatedObjective { interp, sign: 1.0 }
    }

    pub fn maximize(interp: &'a Interpolator) -> Self {
        InterpolatedObjective { interp, sign: -1.0 }
    }
}

impl Objective for InterpolatedObjective<'_> {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self.sign * self.interp.eval_point(x))
    }
}

/// Trace of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerRun {
    pub path: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    /// Device executions spent, including finite-difference probes.
    pub query_count: usize,
    /// Objective evaluations of any kind.
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
    pub endpoint: Vec<f64>,
}

impl OptimizerRun {
    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("runs record at least the initial point")
    }
}

/// Counts evaluations and rejects non-finite values.
pub(crate) struct Tracked<'a, O: Objective + ?Sized> {
    inner: &'a mut O,
    start_queries: usize,
    pub evaluations: usize,
    pub iteration: usize,
}

impl<'a, O: Objective + ?Sized> Tracked<'a, O> {
    pub fn new(inner: &'a mut O) -> Self {
        let start_queries = inner.queries();
        Tracked {
            inner,
            start_queries,
            evaluations: 0,
            iteration: 0,
        }
    }

    pub fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let v = self.inner.evaluate(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective {
                value: v,
                point: x.to_vec(),
                iteration: self.iteration,
            });
        }
        Ok(v)
    }

    pub fn queries(&self) -> usize {
        self.inner.queries() - self.start_queries
    }
}

pub(crate) fn clip(x: &mut [f64], bounds: Option<&[(f64, f64)]>) {
    if let Some(b) = bounds {
        for (v, &(lo, hi)) in x.iter_mut().zip(b) {
            *v = v.clamp(lo, hi);
        }
    }
}

pub(crate) fn check_bounds(dim: usize, bounds: Option<&[(f64, f64)]>) -> Result<()> {
    if let Some(b) = bounds {
        if b.len() != dim {
            return Err(Error::invalid(format!("{} bounds for a {dim}-D problem", b.len())));
        }
        if b.iter().any(|(lo, hi)| !(lo <= hi)) {
            return Err(Error::invalid("bounds need lo <= hi"));
        }
    }
    Ok(())
}

/// Euclidean distance between the endpoints of two runs.
pub fn endpoint_distance(a: &OptimizerRun, b: &OptimizerRun) -> Result<f64> {
    if a.endpoint.len() != b.endpoint.len() {
        return Err(Error::invalid(format!(
            "endpoints have dimensions {} and {}",
            a.endpoint.len(),
            b.endpoint.len()
        )));
    }
    Ok(a.endpoint
        .iter()
        .zip(&b.endpoint)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Five-number summary, for box-plot style reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuartileSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl QuartileSummary {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("summary needs finite, nonempty data"));
        }
        let mut s = values.to_vec();
        s.sort_unstable_by(f64::total_cmp);
        Ok(QuartileSummary {
            min: s[0],
            q1: quantile(&s, 0.25),
            median: quantile(&s, 0.5),
            q3: quantile(&s, 0.75),
            max: s[s.len() - 1],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_at(p: Vec<f64>) -> OptimizerRun {
        OptimizerRun {
            path: vec![p.clone()],
            values: vec![0.0],
            query_count: 0,
            evaluations: 1,
            iterations: 0,
            converged: true,
            endpoint: p,
        }
    }

    #[test]
    fn distance_between_endpoints() {
        assert_eq!(endpoint_distance(&run_at(vec![0.0, 0.0]), &run_at(vec![3.0, 4.0])).unwrap(), 5.0);
        let a = run_at(vec![1.5, -2.0]);
        assert_eq!(endpoint_distance(&a, &a).unwrap(), 0.0);
        assert!(endpoint_distance(&a, &run_at(vec![1.0])).is_err());
    }

    #[test]
    fn quartiles() {
        let q = QuartileSummary::from_values(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!((q.min, q.q1, q.median, q.q3, q.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert!(QuartileSummary::from_values(&[]).is_err());
    }
}
