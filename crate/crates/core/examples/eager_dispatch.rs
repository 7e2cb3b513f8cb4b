//! Spread landscape sampling over simulated workers with heavy-tailed
//! latency, abandon stragglers at a soft timeout, and reconstruct from
//! whatever arrived.

use oscar::cs::SolverConfig;
use oscar::landscape::{nrmse, sample_uniform, GridSpec};
use oscar::parallel::{dispatch, eager_reconstruct, LatencyModel};
use oscar::sim::{generate_landscape, random_regular_graph, Ansatz, NoiseModel};

fn main() -> oscar::Result<()> {
    let problem = random_regular_graph(8, 3, 0)?;
    let spec = GridSpec::qaoa_p1();
    let truth = generate_landscape(&problem, &Ansatz::Qaoa { p: 1 }, &spec, &NoiseModel::ideal(), 0)?;
    let jobs = sample_uniform(&spec, 0.1, 5)?;
    let latency = LatencyModel::lognormal(0.5, 0.0, 0.75, 9);
    let values = truth.values();

    for timeout in [None, Some(3.0), Some(1.5)] {
        let report = dispatch(&jobs, &spec.shape(), |i| Ok(values[i]), 4, &latency, timeout)?;
        let rec = eager_reconstruct(&report, &spec, &SolverConfig::default())?;
        println!(
            "timeout {:>5}: {:>3} of {} done, wall time {:7.1}, NRMSE {:.4}",
            timeout.map_or("none".to_string(), |t| t.to_string()),
            report.completed.len(),
            report.requested.len(),
            report.wall_time,
            nrmse(&truth, &rec)?
        );
    }
    Ok(())
}
