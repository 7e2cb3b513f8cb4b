//! Run ADAM on the spline of a reconstructed landscape and on the live
//! simulator from the same start, and compare where they end up.

use oscar::cs::{reconstruct, SolverConfig};
use oscar::landscape::{sample_uniform, GridSpec, Landscape, LandscapeMeta};
use oscar::optimize::{adam, endpoint_distance, AdamConfig, CircuitObjective, InterpolatedObjective, Interpolator};
use oscar::sim::{generate_landscape, random_regular_graph, Ansatz, NoiseModel};

fn main() -> oscar::Result<()> {
    let problem = random_regular_graph(8, 3, 2)?;
    let a = Ansatz::Qaoa { p: 1 };
    let spec = GridSpec::qaoa_p1();
    let truth = generate_landscape(&problem, &a, &spec, &NoiseModel::ideal(), 0)?;
    let samples = truth.measure(&sample_uniform(&spec, 0.1, 3)?)?;
    let rec = reconstruct(&samples, &SolverConfig::default())?;
    let rec = Landscape::from_reconstruction(spec.clone(), &rec, samples.len(), 0.0, LandscapeMeta::default())?;

    let interp = Interpolator::new(&rec)?;
    let cfg = AdamConfig::for_grid(&spec);
    let init = [0.3, -0.9];
    let surrogate = adam(&mut InterpolatedObjective::maximize(&interp), &init, &cfg)?;
    let mut live = CircuitObjective::new(&problem, a, NoiseModel::ideal(), 0)?;
    let real = adam(&mut live, &init, &cfg)?;

    println!("surrogate: {} iterations, end {:?}, <C> {:.4}", surrogate.iterations, surrogate.endpoint, -surrogate.final_value());
    println!("live:      {} iterations, end {:?}, <C> {:.4}, {} queries", real.iterations, real.endpoint, -real.final_value(), real.query_count);
    println!("endpoint distance {:.4} (grid spacing {:.4})", endpoint_distance(&surrogate, &real)?, spec.max_spacing());
    Ok(())
}
