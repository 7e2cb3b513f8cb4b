use serde::{Deserialize, Serialize};

use super::{check_bounds, clip, Objective, OptimizerRun, Tracked};
use crate::error::{Error, Result};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadConfig {
    /// Offset of the initial simplex vertices along each axis.
    pub initial_step: f64,
    pub max_iters: usize,
    /// Converged when every vertex lies within `xatol` (max-norm) of the best
    /// one and their values within `fatol`.
    pub xatol: f64,
    pub fatol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            initial_step: 0.1,
            max_iters: 500,
            xatol: 1e-4,
            fatol: 1e-4,
            bounds: None,
        }
    }
}

pub fn nelder_mead<O: Objective + ?Sized>(objective: &mut O, init: &[f64], config: &NelderMeadConfig) -> Result<OptimizerRun> {
    if init.is_empty() {
        return Err(Error::invalid("Nelder-Mead needs a nonempty initial point"));
    }
    let mut simplex = vec![init.to_vec()];
    for d in 0..init.len() {
        let mut v = init.to_vec();
        v[d] += config.initial_step;
        simplex.push(v);
    }
    nelder_mead_simplex(objective, simplex, config)
}

/// Volume test: Gaussian elimination on the edge vectors from vertex 0.
fn is_degenerate(simplex: &[Vec<f64>]) -> bool {
    let n = simplex[0].len();
    let mut rows: Vec<Vec<f64>> = simplex[1..]
        .iter()
        .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| a - b).collect())
        .collect();
    let scale = rows.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return true;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())).unwrap();
        if rows[pivot][col].abs() <= 1e-12 * scale {
            return true;
        }
        rows.swap(col, pivot);
        for r in col + 1..n {
            let w = rows[r][col] / rows[col][col];
            for c in col..n {
                rows[r][c] -= w * rows[col][c];
            }
        }
    }
    false
}

/// Nelder–Mead from an explicit `dim + 1` vertex simplex, with reflection,
/// expansion, contraction and shrink coefficients 1, 2, 0.5, 0.5.
pub fn nelder_mead_simplex<O: Objective + ?Sized>(
    objective: &mut O,
    mut simplex: Vec<Vec<f64>>,
    config: &NelderMeadConfig,
) -> Result<OptimizerRun> {
    let dim = simplex.first().map_or(0, Vec::len);
    if dim == 0 || simplex.len() != dim + 1 || simplex.iter().any(|v| v.len() != dim) {
        return Err(Error::invalid("simplex needs dim + 1 vertices of equal nonzero dimension"));
    }
    check_bounds(dim, config.bounds.as_deref())?;
    let bounds = config.bounds.as_deref();
    for v in simplex.iter_mut() {
        clip(v, bounds);
    }
    if is_degenerate(&simplex) {
        return Err(Error::invalid("initial simplex is degenerate (zero volume)"));
    }

    let mut obj = Tracked::new(objective);
    let mut fvals = simplex.iter().map(|v| obj.eval(v)).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..=dim).collect();
    let sort = |order: &mut Vec<usize>, f: &[f64]| order.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
    sort(&mut order, &fvals);

    let mut path = vec![simplex[order[0]].clone()];
    let mut values = vec![fvals[order[0]]];
    let mut converged = false;
    let mut iterations = 0;

    let point = |c: &[f64], toward: &[f64], coef: f64| -> Vec<f64> {
        let mut p: Vec<f64> = c.iter().zip(toward).map(|(ci, ti)| ci + coef * (ti - ci)).collect();
        clip(&mut p, bounds);
        p
    };

    for it in 1..=config.max_iters {
        obj.iteration = it;
        let best = order[0];
        let x_spread = order[1..]
            .iter()
            .flat_map(|&i| simplex[i].iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        let f_spread = order[1..].iter().map(|&i| (fvals[i] - fvals[best]).abs()).fold(0.0f64, f64::max);
        if x_spread <= config.xatol && f_spread <= config.fatol {
            converged = true;
            break;
        }
        iterations = it;

        let worst = order[dim];
        let second = order[dim - 1];
        let mut centroid = vec![0.0; dim];
        for &i in &order[..dim] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / dim as f64;
            }
        }

        let xr = point(&centroid, &simplex[worst], -REFLECT);
        let fr = obj.eval(&xr)?;
        if fr < fvals[best] {
            let xe = point(&centroid, &xr, EXPAND);
            let fe = obj.eval(&xe)?;
            if fe < fr {
                simplex[worst] = xe;
                fvals[worst] = fe;
            } else {
                simplex[worst] = xr;
                fvals[worst] = fr;
            }
        } else if fr < fvals[second] {
            simplex[worst] = xr;
            fvals[worst] = fr;
        } else {
            let outside = fr < fvals[worst];
            let (xc, fc) = if outside {
                let xc = point(&centroid, &xr, CONTRACT);
                let fc = obj.eval(&xc)?;
                (xc, fc)
            } else {
                let xc = point(&centroid, &simplex[worst], CONTRACT);
                let fc = obj.eval(&xc)?;
                (xc, fc)
            };
            if (outside && fc <= fr) || (!outside && fc < fvals[worst]) {
                simplex[worst] = xc;
                fvals[worst] = fc;
            } else {
                let anchor = simplex[best].clone();
                for &i in &order[1..] {
                    simplex[i] = point(&anchor, &simplex[i], SHRINK);
                    fvals[i] = obj.eval(&simplex[i])?;
                }
            }
        }
        sort(&mut order, &fvals);
        path.push(simplex[order[0]].clone());
        values.push(fvals[order[0]]);
    }

    Ok(OptimizerRun {
        endpoint: simplex[order[0]].clone(),
        path,
        values,
        query_count: obj.queries(),
        evaluations: obj.evaluations,
        iterations,
        converged,
    })
}
