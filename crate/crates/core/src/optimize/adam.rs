use serde::{Deserialize, Serialize};

use super::{check_bounds, clip, Objective, OptimizerRun, Tracked};
use crate::error::{Error, Result};
use crate::landscape::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    pub max_iters: usize,
    /// Stop once an update changes the objective by less than this.
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            fd_step: 1e-3,
            max_iters: 1000,
            tol: 1e-6,
            bounds: None,
        }
    }
}

impl AdamConfig {
    /// Defaults with the gradient step set to half the finest grid spacing
    /// and iterates confined to the grid rectangle.
    pub fn for_grid(spec: &GridSpec) -> Self {
        let h = spec.dims().iter().map(|d| d.spacing()).fold(f64::INFINITY, f64::min) / 2.0;
        AdamConfig {
            fd_step: h,
            bounds: Some(spec.bounds()),
            ..Default::default()
        }
    }
}

/// ADAM with central finite-difference gradients. Each iteration costs
/// `2 * dim + 1` objective evaluations.
pub fn adam<O: Objective + ?Sized>(objective: &mut O, init: &[f64], config: &AdamConfig) -> Result<OptimizerRun> {
    if init.is_empty() {
        return Err(Error::invalid("ADAM needs a nonempty initial point"));
    }
    if !(config.fd_step > 0.0) || !(config.lr >= 0.0) || !(0.0..1.0).contains(&config.beta1) || !(0.0..1.0).contains(&config.beta2) {
        return Err(Error::invalid("invalid ADAM configuration"));
    }
    check_bounds(init.len(), config.bounds.as_deref())?;
    let dim = init.len();
    let mut obj = Tracked::new(objective);
    let mut x = init.to_vec();
    clip(&mut x, config.bounds.as_deref());
    let mut f = obj.eval(&x)?;
    let mut path = vec![x.clone()];
    let mut values = vec![f];
    let mut m = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    let mut grad = vec![0.0; dim];
    let mut probe = x.clone();
    let mut converged = false;
    let mut iterations = 0;

    for t in 1..=config.max_iters {
        obj.iteration = t;
        iterations = t;
        for d in 0..dim {
            probe.copy_from_slice(&x);
            probe[d] = x[d] + config.fd_step;
            let up = obj.eval(&probe)?;
            probe[d] = x[d] - config.fd_step;
            let down = obj.eval(&probe)?;
            grad[d] = (up - down) / (2.0 * config.fd_step);
        }
        let c1 = 1.0 - config.beta1.powi(t as i32);
        let c2 = 1.0 - config.beta2.powi(t as i32);
        for d in 0..dim {
            m[d] = config.beta1 * m[d] + (1.0 - config.beta1) * grad[d];
            v[d] = config.beta2 * v[d] + (1.0 - config.beta2) * grad[d] * grad[d];
            x[d] -= config.lr * (m[d] / c1) / ((v[d] / c2).sqrt() + config.eps);
        }
        clip(&mut x, config.bounds.as_deref());
        let f_new = obj.eval(&x)?;
        path.push(x.clone());
        values.push(f_new);
        let delta = (f_new - f).abs();
        f = f_new;
        if delta < config.tol {
            converged = true;
            break;
        }
    }

    Ok(OptimizerRun {
        endpoint: x,
        path,
        values,
        query_count: obj.queries(),
        evaluations: obj.evaluations,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::FnObjective;

    #[test]
    fn quadratic_bowl() {
        let target = [0.3, -0.8];
        let mut obj = FnObjective(|x: &[f64]| (x[0] - target[0]).powi(2) + (x[1] - target[1]).powi(2));
        let cfg = AdamConfig {
            max_iters: 5000,
            tol: 1e-12,
            ..Default::default()
        };
        let run = adam(&mut obj, &[1.5, 1.0], &cfg).unwrap();
        let dist = ((run.endpoint[0] - target[0]).powi(2) + (run.endpoint[1] - target[1]).powi(2)).sqrt();
        assert!(dist < 1e-3, "endpoint {:?}", run.endpoint);
        assert_eq!(run.query_count, 0);
        assert_eq!(run.evaluations, 1 + 5 * run.iterations);
    }

    #[test]
    fn zero_learning_rate_stays_put() {
        let mut obj = FnObjective(|x: &[f64]| x[0].sin() + x[1]);
        let cfg = AdamConfig { lr: 0.0, ..Default::default() };
        let run = adam(&mut obj, &[0.4, 0.1], &cfg).unwrap();
        assert!(run.path.iter().all(|p| p == &vec![0.4, 0.1]));
        assert!(run.converged);
    }

    #[test]
    fn non_finite_objective_aborts() {
        let mut obj = FnObjective(|x: &[f64]| if x[0] < 0.95 { f64::NAN } else { x[0] });
        let err = adam(&mut obj, &[1.0], &AdamConfig { lr: 0.1, ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::NonFiniteObjective { .. }));
    }

    #[test]
    fn respects_bounds() {
        let mut obj = FnObjective(|x: &[f64]| x[0]);
        let cfg = AdamConfig {
            lr: 0.1,
            bounds: Some(vec![(-0.5, 0.5)]),
            max_iters: 100,
            ..Default::default()
        };
        let run = adam(&mut obj, &[0.0], &cfg).unwrap();
        assert!(run.path.iter().all(|p| p[0] >= -0.5));
        assert_eq!(run.endpoint, vec![-0.5]);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (3.0 * x[0]).cos() + x[1] * x[1];
        let a = adam(&mut FnObjective(f), &[0.2, 0.9], &AdamConfig::default()).unwrap();
        let b = adam(&mut FnObjective(f), &[0.2, 0.9], &AdamConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
